// Gram lattices and the root-lattice spec grammar.
//
// A GramLattice is a finitely generated quadratic module: a symmetric positive
// (semi)definite rational Gram matrix plus the invariant factors of a finite
// torsion part.  Specs are sums of tokens "A<n>", "D<n>", "E6|E7|E8",
// "U<p>/<q>" for the rank-one form <p/q>, explicit blocks "[a,b;c,d]",
// an optional rational scale prefix "s*" and a "dual(...)" wrapper.
// "tok^k" repeats a summand k times.
#pragma once

#include <map>
#include <set>

#include "cyqc/matrix.hpp"

namespace cyqc {

struct GramLattice {
  int rank = 0;
  MatQ gram;               // rank x rank, symmetric
  Factors torsion;         // invariant factors d1 | d2 | ...

  GramLattice() : gram(0, 0) {}
  explicit GramLattice(MatQ g, Factors t = {})
      : rank(g.rows), gram(std::move(g)), torsion(std::move(t)) {
    assert(is_symmetric(gram));
  }
};

inline Rat det(const GramLattice& l) {
  return l.rank == 0 ? Rat(1) : det_q(l.gram);
}

inline GramLattice direct_sum(const GramLattice& a, const GramLattice& b) {
  MatQ g(a.rank + b.rank, a.rank + b.rank);
  for (int i = 0; i < a.rank; ++i)
    for (int j = 0; j < a.rank; ++j) g(i, j) = a.gram(i, j);
  for (int i = 0; i < b.rank; ++i)
    for (int j = 0; j < b.rank; ++j) g(a.rank + i, a.rank + j) = b.gram(i, j);
  Factors t = a.torsion;
  t.insert(t.end(), b.torsion.begin(), b.torsion.end());
  std::sort(t.begin(), t.end());
  return GramLattice(std::move(g), std::move(t));
}

inline GramLattice scale(const GramLattice& l, const Rat& s) {
  MatQ g = l.gram;
  for (auto& v : g.a) v *= s;
  return GramLattice(std::move(g), l.torsion);
}

// Standard Cartan matrices.  Conventions: A_n is the path 1..n; D_n is the
// path 1..n-1 with node n attached to node n-2 (so node 1 is the tail tip and
// nodes n-1, n the fork tips); E_n is the path 1..n-1 with node n attached to
// node 3.
inline MatQ cartan(char family, int n) {
  auto path = [](MatQ& m, int a, int b) { m(a - 1, b - 1) = m(b - 1, a - 1) = -1; };
  MatQ m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 2;
  switch (family) {
    case 'A':
      if (n < 1) throw std::invalid_argument("A_n needs n >= 1");
      for (int i = 1; i < n; ++i) path(m, i, i + 1);
      break;
    case 'D':
      if (n < 4) throw std::invalid_argument("D_n needs n >= 4");
      for (int i = 1; i < n - 1; ++i) path(m, i, i + 1);
      path(m, n - 2, n);
      break;
    case 'E':
      if (n < 6 || n > 8) throw std::invalid_argument("E_n needs n in 6..8");
      for (int i = 1; i < n - 1; ++i) path(m, i, i + 1);
      path(m, 3, n);
      break;
    default:
      throw std::invalid_argument("unknown family");
  }
  return m;
}

inline GramLattice dual(const GramLattice& l) {
  if (l.rank == 0) return l;
  Rat d = det_q(l.gram);
  if (d == 0) throw std::domain_error("degenerate lattice");
  return GramLattice(inverse_q(l.gram), l.torsion);
}

// Exact pairwise (Lagrange-style) size reduction of a positive-definite Gram.
// Returns the reduced Gram and the unimodular transform t with rows giving
// the new basis in the old coordinates.  Not a guaranteed-minimal basis, but
// it keeps the diagonal small, which bounds the enumeration work elsewhere.
struct ReducedBasis {
  MatQ gram;
  MatZ transform;
};

inline ReducedBasis reduce_gram(const MatQ& g0) {
  int n = g0.rows;
  MatQ g = g0;
  MatZ t = identity_z(n);
  bool changed = true;
  int guard = 0;
  while (changed && guard++ < 200) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (g(j, j) <= 0) throw std::domain_error("form not positive definite");
        // k = -round(g_ij / g_jj)
        Rat ratio = g(i, j) / g(j, j);
        Int k = floor_rat(ratio + rat(1, 2));
        if (k == 0) continue;
        // b_i -= k b_j ; new norm = g_ii - 2 k g_ij + k^2 g_jj
        Rat nn = g(i, i) - Rat(2 * k) * g(i, j) + Rat(k * k) * g(j, j);
        if (nn >= g(i, i)) continue;
        for (int c = 0; c < n; ++c) t(i, c) -= k * t(j, c);
        for (int c = 0; c < n; ++c)
          if (c != i) {
            g(i, c) -= Rat(k) * g(j, c);
            g(c, i) = g(i, c);
          }
        g(i, i) = nn;
        changed = true;
      }
  }
  // deterministic order: sort rows by (norm, transform row)
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (g(a, a) != g(b, b)) return g(a, a) < g(b, b);
    for (int c = 0; c < n; ++c)
      if (t(a, c) != t(b, c)) return t(a, c) < t(b, c);
    return false;
  });
  ReducedBasis out;
  out.gram = MatQ(n, n);
  out.transform = MatZ(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.gram(i, j) = g(idx[i], idx[j]);
    for (int c = 0; c < n; ++c) out.transform(i, c) = t(idx[i], c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spec grammar

struct LatticeSpec {
  struct Summand {
    enum Kind { ADE, RankOne, Explicit } kind = ADE;
    char family = 'A';
    int n = 1;
    Rat value;   // RankOne entry
    MatQ block;  // Explicit entry
    Rat scale = 1;
    bool dualize = false;
  };
  std::vector<Summand> summands;
  bool zero() const { return summands.empty(); }
};

namespace detail {

inline std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline MatQ parse_gram_block(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw std::invalid_argument("bad gram block: " + s);
  auto rows = detail::split_top(s.substr(1, s.size() - 2), ';');
  int n = int(rows.size());
  MatQ m(n, n);
  for (int i = 0; i < n; ++i) {
    auto cells = detail::split_top(rows[i], ',');
    if (int(cells.size()) != n) throw std::invalid_argument("non-square gram block");
    for (int j = 0; j < n; ++j) m(i, j) = parse_rat(detail::strip(cells[j]));
  }
  if (!is_symmetric(m)) throw std::invalid_argument("gram block not symmetric");
  return m;
}

inline LatticeSpec parse_spec(const std::string& text) {
  LatticeSpec spec;
  std::string t = detail::strip(text);
  if (t.empty() || t == "0" || t == "-") return spec;
  for (std::string part : detail::split_top(t, '+')) {
    part = detail::strip(part);
    LatticeSpec::Summand s;
    long repeat = 1;
    // repeat suffix
    if (auto pos = part.rfind('^'); pos != std::string::npos &&
                                    part.find(']', pos) == std::string::npos &&
                                    part.find(')', pos) == std::string::npos) {
      repeat = std::stol(part.substr(pos + 1));
      part = detail::strip(part.substr(0, pos));
    }
    // scale prefix  s*rest  (rest not a bare number)
    if (auto pos = part.find('*'); pos != std::string::npos) {
      s.scale = parse_rat(part.substr(0, pos));
      part = detail::strip(part.substr(pos + 1));
    }
    if (part.rfind("dual(", 0) == 0 && part.back() == ')') {
      s.dualize = true;
      part = detail::strip(part.substr(5, part.size() - 6));
    }
    if (part.empty()) throw std::invalid_argument("empty summand");
    if (part[0] == '[') {
      s.kind = LatticeSpec::Summand::Explicit;
      s.block = parse_gram_block(part);
    } else if (part[0] == 'U') {
      s.kind = LatticeSpec::Summand::RankOne;
      s.value = parse_rat(part.substr(1));
      if (s.value <= 0) throw std::invalid_argument("rank-one form must be positive");
    } else if (part[0] == 'A' || part[0] == 'D' || part[0] == 'E') {
      s.kind = LatticeSpec::Summand::ADE;
      s.family = part[0];
      s.n = std::stoi(part.substr(1));
    } else {
      throw std::invalid_argument("bad lattice token: " + part);
    }
    for (long r = 0; r < repeat; ++r) spec.summands.push_back(s);
  }
  return spec;
}

inline std::string spec_to_string(const LatticeSpec& spec) {
  if (spec.zero()) return "0";
  std::string out;
  for (size_t i = 0; i < spec.summands.size(); ++i) {
    const auto& s = spec.summands[i];
    if (i) out += "+";
    std::string tok;
    switch (s.kind) {
      case LatticeSpec::Summand::ADE:
        tok = std::string(1, s.family) + std::to_string(s.n);
        break;
      case LatticeSpec::Summand::RankOne:
        tok = "U" + to_string(s.value);
        break;
      case LatticeSpec::Summand::Explicit: {
        std::ostringstream os;
        os << "[";
        for (int r = 0; r < s.block.rows; ++r) {
          if (r) os << ";";
          for (int c = 0; c < s.block.cols; ++c) {
            if (c) os << ",";
            os << s.block(r, c);
          }
        }
        os << "]";
        tok = os.str();
        break;
      }
    }
    if (s.dualize) tok = "dual(" + tok + ")";
    if (s.scale != 1) tok = to_string(s.scale) + "*" + tok;
    out += tok;
  }
  return out;
}

// Expansion to a Gram lattice.  Block-diagonal over the summands in order;
// deterministic and independent of summand grouping.
inline GramLattice gram_of(const LatticeSpec& spec) {
  GramLattice out;
  for (const auto& s : spec.summands) {
    GramLattice block;
    switch (s.kind) {
      case LatticeSpec::Summand::ADE:
        block = GramLattice(cartan(s.family, s.n));
        break;
      case LatticeSpec::Summand::RankOne: {
        MatQ m(1, 1);
        m(0, 0) = s.value;
        block = GramLattice(std::move(m));
        break;
      }
      case LatticeSpec::Summand::Explicit:
        block = GramLattice(s.block);
        break;
    }
    if (s.dualize) block = dual(block);
    if (s.scale != 1) block = scale(block, s.scale);
    out = direct_sum(out, block);
  }
  return out;
}

inline GramLattice gram_of(const std::string& spec) {
  return gram_of(parse_spec(spec));
}

inline LatticeSpec spec_ade(char family, int n) {
  LatticeSpec s;
  LatticeSpec::Summand x;
  x.kind = LatticeSpec::Summand::ADE;
  x.family = family;
  x.n = n;
  s.summands.push_back(x);
  return s;
}

inline LatticeSpec spec_concat(const LatticeSpec& a, const LatticeSpec& b) {
  LatticeSpec s = a;
  s.summands.insert(s.summands.end(), b.summands.begin(), b.summands.end());
  return s;
}

// Canonical key for comparing specs as multisets of summands.
inline std::string spec_multiset_key(const LatticeSpec& spec) {
  std::vector<std::string> toks;
  for (const auto& s : spec.summands) {
    LatticeSpec one;
    one.summands.push_back(s);
    toks.push_back(spec_to_string(one));
  }
  std::sort(toks.begin(), toks.end());
  std::string out;
  for (auto& t : toks) out += t + "|";
  return out;
}

}  // namespace cyqc
