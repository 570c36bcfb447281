// Kodaira fiber-type arithmetic: Euler numbers, associated root lattices,
// contribution terms, ramified base-change pullback, deficiencies, suitability
// of quotient configurations, and vanishing-order fiber typing.
//
// Component labeling conventions (fixed here once and used everywhere):
//   I_n     cyclic labels 0..n-1, 0 = neutral; label k <-> A_{n-1} basis k.
//   I_n*    the four multiplicity-one ends: 0 = neutral, 1 = the end sharing
//           the near fork with 0 (D_{n+4} tail node 1, contribution 1),
//           2, 3 = the far ends (fork nodes n+3, n+4, contribution (n+4)/4).
//   III     0, 1 with 1 <-> the A_1 node.
//   IV      0, 1, 2 with k <-> A_2 basis k.
//   IV*     0, 1, 2: the two non-neutral multiplicity-one ends are the E_6
//           basis nodes of diagonal contribution 4/3 (in node order).
//   III*    0, 1: the non-neutral multiplicity-one end is the E_7 node of
//           contribution 3/2.
//   II, II*, I_0, I_1: only the neutral label 0.
// Generic component labels 1..rank index the root-lattice basis directly;
// contr(f, i, j) is the (i, j) entry of the inverse Gram, 0 at the neutral.
#pragma once

#include "cyqc/lattice.hpp"

namespace cyqc {

struct Fiber {
  enum Kind { In, Instar, II, III, IV, IVstar, IIIstar, IIstar } kind = In;
  int n = 0;  // parameter for In / Instar

  bool operator==(const Fiber& o) const { return kind == o.kind && n == o.n; }
  auto operator<=>(const Fiber& o) const = default;
  bool smooth() const { return kind == In && n == 0; }
};

inline Fiber fiber_I(int n) { return Fiber{Fiber::In, n}; }
inline Fiber fiber_Istar(int n) { return Fiber{Fiber::Instar, n}; }

inline std::string fiber_to_string(const Fiber& f) {
  switch (f.kind) {
    case Fiber::In: return "I" + std::to_string(f.n);
    case Fiber::Instar: return "I" + std::to_string(f.n) + "*";
    case Fiber::II: return "II";
    case Fiber::III: return "III";
    case Fiber::IV: return "IV";
    case Fiber::IVstar: return "IV*";
    case Fiber::IIIstar: return "III*";
    case Fiber::IIstar: return "II*";
  }
  return "?";
}

inline Fiber parse_fiber(const std::string& s) {
  if (s == "II") return Fiber{Fiber::II, 0};
  if (s == "III") return Fiber{Fiber::III, 0};
  if (s == "IV") return Fiber{Fiber::IV, 0};
  if (s == "II*") return Fiber{Fiber::IIstar, 0};
  if (s == "III*") return Fiber{Fiber::IIIstar, 0};
  if (s == "IV*") return Fiber{Fiber::IVstar, 0};
  if (s.size() >= 2 && s[0] == 'I') {
    bool star = s.back() == '*';
    std::string digits = s.substr(1, s.size() - 1 - (star ? 1 : 0));
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
      return star ? fiber_Istar(std::stoi(digits)) : fiber_I(std::stoi(digits));
  }
  throw std::invalid_argument("bad fiber token: " + s);
}

inline int euler(const Fiber& f) {
  switch (f.kind) {
    case Fiber::In: return f.n;
    case Fiber::Instar: return f.n + 6;
    case Fiber::II: return 2;
    case Fiber::III: return 3;
    case Fiber::IV: return 4;
    case Fiber::IVstar: return 8;
    case Fiber::IIIstar: return 9;
    case Fiber::IIstar: return 10;
  }
  return 0;
}

// A-D-E lattice attached to the fiber (rank 0 for irreducible fibers).
inline LatticeSpec root_lattice(const Fiber& f) {
  switch (f.kind) {
    case Fiber::In: return f.n >= 2 ? spec_ade('A', f.n - 1) : LatticeSpec{};
    case Fiber::Instar: return spec_ade('D', f.n + 4);
    case Fiber::II: return LatticeSpec{};
    case Fiber::III: return spec_ade('A', 1);
    case Fiber::IV: return spec_ade('A', 2);
    case Fiber::IVstar: return spec_ade('E', 6);
    case Fiber::IIIstar: return spec_ade('E', 7);
    case Fiber::IIstar: return spec_ade('E', 8);
  }
  return LatticeSpec{};
}

inline int root_rank(const Fiber& f) {
  auto s = root_lattice(f);
  return s.zero() ? 0 : gram_of(s).rank;
}

// contr(f, i, j): entry (i, j) of the inverse Gram of root_lattice(f) under
// the labeling above; zero when either index is neutral.
inline Rat contr(const Fiber& f, int i, int j) {
  int r = root_rank(f);
  if (i < 0 || j < 0 || i > r || j > r)
    throw std::invalid_argument("component index out of range for " + fiber_to_string(f));
  if (i == 0 || j == 0) return Rat(0);
  static std::map<std::string, MatQ> cache;
  std::string key = fiber_to_string(f);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, inverse_q(gram_of(root_lattice(f)).gram)).first;
  return it->second(i - 1, j - 1);
}

// ---------------------------------------------------------------------------
// Component groups (the group of simple components reachable by sections).
// Elements are stored as pairs (a, b) modulo (o1, o2); o2 == 1 for cyclic.

struct CompGroup {
  long o1 = 1, o2 = 1;
  long size() const { return o1 * o2; }
};

struct CompElt {
  long a = 0, b = 0;
  bool operator==(const CompElt&) const = default;
  auto operator<=>(const CompElt&) const = default;
};

inline CompGroup component_group(const Fiber& f) {
  switch (f.kind) {
    case Fiber::In: return {std::max(1, f.n), 1};
    case Fiber::Instar: return f.n % 2 ? CompGroup{4, 1} : CompGroup{2, 2};
    case Fiber::III: return {2, 1};
    case Fiber::IV: return {3, 1};
    case Fiber::IVstar: return {3, 1};
    case Fiber::IIIstar: return {2, 1};
    default: return {1, 1};
  }
}

inline CompElt comp_add(const CompGroup& g, const CompElt& x, const CompElt& y) {
  return {(x.a + y.a) % g.o1, (x.b + y.b) % g.o2};
}

inline CompElt comp_neg(const CompGroup& g, const CompElt& x) {
  return {(g.o1 - x.a) % g.o1, (g.o2 - x.b) % g.o2};
}

inline CompElt comp_mul(const CompGroup& g, long k, const CompElt& x) {
  k %= g.size();
  if (k < 0) k += g.size();
  CompElt r;
  for (long i = 0; i < k; ++i) r = comp_add(g, r, x);
  return r;
}

inline long comp_order(const CompGroup& g, const CompElt& x) {
  CompElt r = x;
  long k = 1;
  while (!(r == CompElt{})) {
    r = comp_add(g, r, x);
    ++k;
  }
  return k;
}

inline std::vector<CompElt> comp_elements(const CompGroup& g) {
  std::vector<CompElt> out;
  for (long a = 0; a < g.o1; ++a)
    for (long b = 0; b < g.o2; ++b) out.push_back({a, b});
  return out;
}

// Root-basis label of a component-group element (0 = neutral).
inline int comp_label(const Fiber& f, const CompElt& x) {
  if (x == CompElt{}) return 0;
  switch (f.kind) {
    case Fiber::In:
      return int(x.a);  // cyclic label = basis label
    case Fiber::Instar: {
      int m = f.n + 4;
      if (f.n % 2) {  // Z4: 1 -> far end (node m-1), 2 -> near end (node 1), 3 -> far end (node m)
        if (x.a == 1) return m - 1;
        if (x.a == 2) return 1;
        return m;
      }
      // Z2 x Z2: (1,0) -> near end (node 1), (0,1) -> node m-1, (1,1) -> node m
      if (x.a == 1 && x.b == 0) return 1;
      if (x.a == 0 && x.b == 1) return m - 1;
      return m;
    }
    case Fiber::III: return 1;
    case Fiber::IV: return int(x.a);
    case Fiber::IVstar: {
      // the two nodes of E6 with inverse-Gram diagonal 4/3, in node order
      static std::vector<int> nodes = [] {
        std::vector<int> out;
        MatQ inv = inverse_q(cartan('E', 6));
        for (int i = 0; i < 6; ++i)
          if (inv(i, i) == rat(4, 3)) out.push_back(i + 1);
        return out;
      }();
      return nodes[x.a - 1];
    }
    case Fiber::IIIstar: {
      static int node = [] {
        MatQ inv = inverse_q(cartan('E', 7));
        for (int i = 0; i < 7; ++i)
          if (inv(i, i) == rat(3, 2)) return i + 1;
        return -1;
      }();
      return node;
    }
    default:
      throw std::invalid_argument("no non-neutral section components on " + fiber_to_string(f));
  }
}

inline Rat contr(const Fiber& f, const CompElt& x, const CompElt& y) {
  return contr(f, comp_label(f, x), comp_label(f, y));
}

// ---------------------------------------------------------------------------
// Configurations

struct Config {
  std::vector<Fiber> fibers;  // singular fibers (smooth fibers are not listed)
  int at_zero = -1;           // index of the marked f_0, or -1 when smooth
  Fiber at_infinity = fiber_I(0);

  int total_euler() const {
    int s = 0;
    for (const auto& f : fibers) s += euler(f);
    return s;
  }
};

inline std::string config_to_string(const Config& c) {
  // run-length over equal fibers, marked fiber first
  std::string out;
  std::vector<std::pair<Fiber, int>> runs;
  std::vector<Fiber> rest;
  for (int i = 0; i < int(c.fibers.size()); ++i)
    if (i != c.at_zero) rest.push_back(c.fibers[i]);
  std::sort(rest.begin(), rest.end(), [](const Fiber& a, const Fiber& b) {
    return euler(a) != euler(b) ? euler(a) > euler(b) : a < b;
  });
  if (c.at_zero >= 0) out += fiber_to_string(c.fibers[c.at_zero]) + "@0";
  for (size_t i = 0; i < rest.size();) {
    size_t j = i;
    while (j < rest.size() && rest[j] == rest[i]) ++j;
    if (!out.empty()) out += ",";
    out += fiber_to_string(rest[i]);
    if (j - i > 1) out += "x" + std::to_string(j - i);
    i = j;
  }
  if (!c.at_infinity.smooth()) out += "," + fiber_to_string(c.at_infinity) + "@inf";
  return out.empty() ? "-" : out;
}

inline Config parse_config(const std::string& text) {
  Config c;
  if (text.empty() || text == "-") return c;
  for (std::string part : detail::split_top(text, ',')) {
    part = detail::strip(part);
    bool zero = false, inf = false;
    if (auto p = part.find("@0"); p != std::string::npos) {
      zero = true;
      part = part.substr(0, p) + part.substr(p + 2);
    }
    if (auto p = part.find("@inf"); p != std::string::npos) {
      inf = true;
      part = part.substr(0, p) + part.substr(p + 4);
    }
    long count = 1;
    if (auto p = part.find('x'); p != std::string::npos && p > 0 && p + 1 < part.size() &&
                                 part.find_first_not_of("0123456789", p + 1) == std::string::npos) {
      count = std::stol(part.substr(p + 1));
      part = part.substr(0, p);
    }
    Fiber f = parse_fiber(detail::strip(part));
    if (inf) {
      c.at_infinity = f;
      continue;
    }
    for (long i = 0; i < count; ++i) {
      if (zero && i == 0) c.at_zero = int(c.fibers.size());
      c.fibers.push_back(f);
    }
  }
  return c;
}

inline std::multiset<Fiber> fiber_multiset(const Config& c) {
  return std::multiset<Fiber>(c.fibers.begin(), c.fibers.end());
}

// ---------------------------------------------------------------------------
// Ramified base-change pullback, executable form of the quotient/cover map.

inline Fiber pullback(const Fiber& f, long m) {
  if (m < 2) throw std::invalid_argument("pullback needs m >= 2");
  auto pick = [&](long period, std::initializer_list<Fiber> table) {
    return *(table.begin() + (m % period));
  };
  switch (f.kind) {
    case Fiber::In: return fiber_I(int(m) * f.n);
    case Fiber::Instar:
      return m % 2 == 0 ? fiber_I(int(m) * f.n) : fiber_Istar(int(m) * f.n);
    case Fiber::II:
      return pick(6, {fiber_I(0), Fiber{Fiber::II, 0}, Fiber{Fiber::IV, 0}, fiber_Istar(0),
                      Fiber{Fiber::IVstar, 0}, Fiber{Fiber::IIstar, 0}});
    case Fiber::III:
      return pick(4, {fiber_I(0), Fiber{Fiber::III, 0}, fiber_Istar(0), Fiber{Fiber::IIIstar, 0}});
    case Fiber::IV:
      return pick(3, {fiber_I(0), Fiber{Fiber::IV, 0}, Fiber{Fiber::IVstar, 0}});
    case Fiber::IVstar:
      return pick(3, {fiber_I(0), Fiber{Fiber::IVstar, 0}, Fiber{Fiber::IV, 0}});
    case Fiber::IIIstar:
      return pick(4, {fiber_I(0), Fiber{Fiber::IIIstar, 0}, fiber_Istar(0), Fiber{Fiber::III, 0}});
    case Fiber::IIstar:
      return pick(6, {fiber_I(0), Fiber{Fiber::IIstar, 0}, Fiber{Fiber::IVstar, 0}, fiber_Istar(0),
                      Fiber{Fiber::IV, 0}, Fiber{Fiber::II, 0}});
  }
  return f;
}

// Euler-characteristic defect of a quotient-surface fiber under the degree-m
// base change.  Ramified values follow the case formulas; the epsilon/delta
// residue subtlety is kept as two separate formulas.
inline long deficiency(const Fiber& f, long m, bool ramified) {
  if (m < 2) throw std::invalid_argument("deficiency needs m >= 2");
  long chi = euler(f);
  if (!ramified) return (1 - m) * chi;
  switch (f.kind) {
    case Fiber::In: return (1 - m) * chi;
    case Fiber::Instar: {
      long delta = m % 2;
      return (1 - m) * chi + 6 * (m - delta);
    }
    case Fiber::II:
    case Fiber::III:
    case Fiber::IV: {
      long delta = m % (12 / chi);
      return (1 - delta) * chi;
    }
    case Fiber::IVstar:
    case Fiber::IIIstar:
    case Fiber::IIstar: {
      long eps = (m - 1) % (12 / (12 - chi));
      return eps * (12 - chi);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Suitability of a quotient configuration of order m.

struct SuitabilityReport {
  bool suitable = false;
  bool f_infinity_ok = false;
  bool f0_identity_ok = false;
  bool total_zero = false;
  long f0_deficiency = 0;
  long f0_required = 0;
  long total_deficiency = 0;
  std::string reason;
};

inline SuitabilityReport check_suitable_quotient(const Config& c, long m) {
  SuitabilityReport r;
  if (c.total_euler() + euler(c.at_infinity) != 12)
    throw std::invalid_argument("configuration Euler sum != 12");
  r.f_infinity_ok = c.at_infinity.kind == Fiber::In;
  Fiber f0 = c.at_zero >= 0 ? c.fibers[c.at_zero] : fiber_I(0);
  r.f0_deficiency = c.at_zero >= 0 ? deficiency(f0, m, true) : 0;
  r.f0_required = (m - 1) * (12 - euler(f0));
  r.f0_identity_ok = r.f0_deficiency == r.f0_required;
  long total = r.f0_deficiency + deficiency(c.at_infinity, m, true);
  for (int i = 0; i < int(c.fibers.size()); ++i)
    if (i != c.at_zero) total += deficiency(c.fibers[i], m, false);
  r.total_deficiency = total;
  r.total_zero = total == 0;
  r.suitable = r.f_infinity_ok && r.f0_identity_ok && r.total_zero;
  if (!r.f_infinity_ok)
    r.reason = "fiber at infinity must be of type I_r";
  else if (!r.f0_identity_ok)
    r.reason = "deficiency of f_0 is " + std::to_string(r.f0_deficiency) +
               ", needs " + std::to_string(r.f0_required);
  else if (!r.total_zero)
    r.reason = "total deficiency " + std::to_string(r.total_deficiency) + " != 0";
  return r;
}

// Allowed f_0 types for order m, derived by solving the ramified-deficiency
// identity over all fiber kinds; the pulled-back fiber must still fit on a
// rational elliptic surface (its root lattice embeds in E8, so rank <= 8).
inline std::vector<Fiber> suitable_f0_types(long m) {
  if (m < 2) throw std::invalid_argument("needs m >= 2");
  std::vector<Fiber> all;
  for (int n = 1; n <= 12; ++n) all.push_back(fiber_I(n));
  for (int n = 0; n <= 6; ++n) all.push_back(fiber_Istar(n));
  for (auto k : {Fiber::II, Fiber::III, Fiber::IV, Fiber::IVstar, Fiber::IIIstar, Fiber::IIstar})
    all.push_back(Fiber{k, 0});
  std::vector<Fiber> out;
  for (const auto& f : all) {
    if (euler(f) > 12) continue;
    if (deficiency(f, m, true) != (m - 1) * (12 - euler(f))) continue;
    if (root_rank(pullback(f, m)) > 8) continue;
    out.push_back(f);
  }
  std::sort(out.begin(), out.end(), [](const Fiber& a, const Fiber& b) {
    return euler(a) != euler(b) ? euler(a) > euler(b) : a < b;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Weierstrass vanishing orders (short form y^2 = x^3 + A4 x + A6).

struct WeierstrassOrders {
  long ord_a4 = 0, ord_a6 = 0, ord_delta = 0;
};

inline Fiber kodaira_from_orders(const WeierstrassOrders& w) {
  long a = w.ord_a4, b = w.ord_a6, d = w.ord_delta;
  if (a >= 4 && b >= 6) throw std::domain_error("non-minimal model");
  if (d == 0) return fiber_I(0);
  if (a == 0 && b == 0) return fiber_I(int(d));
  if (a >= 1 && b == 1) return Fiber{Fiber::II, 0};
  if (a == 1 && b >= 2) return Fiber{Fiber::III, 0};
  if (a >= 2 && b == 2) return Fiber{Fiber::IV, 0};
  if (a >= 2 && b >= 3 && d == 6) return fiber_Istar(0);
  if (a == 2 && b == 3 && d > 6) return fiber_Istar(int(d - 6));
  if (a >= 3 && b == 4) return Fiber{Fiber::IVstar, 0};
  if (a == 3 && b >= 5) return Fiber{Fiber::IIIstar, 0};
  if (a >= 4 && b == 5) return Fiber{Fiber::IIstar, 0};
  throw std::domain_error("inconsistent vanishing orders");
}

// Minimal polynomial support for typing an explicit Weierstrass pencil.
struct Poly {
  std::vector<Rat> c;  // coefficient of t^i

  int degree() const {
    for (int i = int(c.size()) - 1; i >= 0; --i)
      if (c[i] != 0) return i;
    return -1;
  }
  bool zero() const { return degree() < 0; }
};

inline Poly poly(std::vector<Rat> coeffs) { return Poly{std::move(coeffs)}; }

inline Poly operator*(const Poly& a, const Poly& b) {
  if (a.zero() || b.zero()) return Poly{};
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

inline Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

inline Poly scale_poly(const Poly& a, const Rat& s) {
  Poly r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

inline Poly discriminant(const Poly& a4, const Poly& a6) {
  return scale_poly(a4 * a4 * a4, 4) + scale_poly(a6 * a6, 27);
}

// Order of vanishing at t = root (exact division by (t - root)).
inline long vanishing_order(Poly p, const Rat& root) {
  if (p.zero()) throw std::domain_error("zero polynomial");
  long ord = 0;
  while (true) {
    // evaluate
    Rat v = 0;
    for (int i = p.degree(); i >= 0; --i) v = v * root + p.c[i];
    if (v != 0) return ord;
    // synthetic division by (t - root)
    std::vector<Rat> q(std::max(0, p.degree()), Rat(0));
    Rat carry = 0;
    for (int i = p.degree(); i >= 1; --i) {
      carry = p.c[i] + carry * root;
      q[i - 1] = carry;
    }
    p.c = q;
    ++ord;
    if (p.zero()) throw std::domain_error("zero polynomial");
  }
}

// Order of vanishing at infinity of a section of O(deg_bound) on P^1.
inline long vanishing_order_at_infinity(const Poly& p, int deg_bound) {
  if (p.zero()) throw std::domain_error("zero polynomial");
  return deg_bound - p.degree();
}

// Kodaira type of the fiber at t = root for the pencil (A4, A6), with the
// discriminant order cross-checked against 4 A4^3 + 27 A6^2.
inline Fiber kodaira_at(const Poly& a4, const Poly& a6, const Rat& root) {
  Poly disc = discriminant(a4, a6);
  WeierstrassOrders w;
  w.ord_a4 = a4.zero() ? 4 : vanishing_order(a4, root);
  w.ord_a6 = a6.zero() ? 6 : vanishing_order(a6, root);
  w.ord_delta = vanishing_order(disc, root);
  return kodaira_from_orders(w);
}

inline Fiber kodaira_at_infinity(const Poly& a4, const Poly& a6) {
  Poly disc = discriminant(a4, a6);
  WeierstrassOrders w;
  w.ord_a4 = a4.zero() ? 4 : vanishing_order_at_infinity(a4, 4);
  w.ord_a6 = a6.zero() ? 6 : vanishing_order_at_infinity(a6, 6);
  w.ord_delta = vanishing_order_at_infinity(disc, 12);
  return kodaira_from_orders(w);
}

}  // namespace cyqc
