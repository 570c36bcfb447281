// Mordell-Weil data derived from the singular-fiber root lattice T.
//
// T is embedded in E8 and MW_lat is the dual of the orthogonal complement;
// the torsion subgroup is the glue group of the saturation.  Abstractly a
// root lattice can sit in E8 with several saturations, so the embedding is
// steered through an overlattice: candidate glue groups are the subgroups of
// the discriminant group of T that are isotropic for the discriminant form
// (all norms even, pairings integral) and generated by at most two elements
// (torsion of an elliptic fibration injects into a single smooth fiber, so
// two generators is the cap).  Candidates are tried by decreasing order; the
// first that embeds wins.  The tables downstream are the oracle for this
// choice.
#pragma once

#include "cyqc/isometry.hpp"
#include "cyqc/kodaira.hpp"

namespace cyqc {

struct MWGroup {
  GramLattice lat;                    // height-pairing lattice MW_lat
  Factors tors;                       // invariant factors of MW_tors
  std::optional<GramLattice> narrow;  // narrow lattice, isometric to dual(lat)
};

struct MWDerivation {
  MWGroup mw;
  Embedding t_embedding;   // witnessing embedding of (the free part of) T in E8
  Factors glue;            // saturation glue = MW_tors
  GramLattice t_saturated; // primitive closure of T inside E8
};

// ---------------------------------------------------------------------------
// Discriminant groups

struct DiscriminantGroup {
  MatQ gram;           // the underlying integral Gram
  MatQ gram_inv;
  MatZ hnf;            // row HNF of gram (for canonical representatives)
  long order = 1;
  std::vector<VecZ> elements;  // canonical representatives of Z^n / G Z^n
};

inline VecZ disc_canonical(const DiscriminantGroup& d, VecZ y) {
  int n = d.hnf.rows;
  for (int i = 0; i < n; ++i) {
    Int q = floor_div(Int(y[i]), d.hnf(i, i));
    if (q != 0)
      for (int j = i; j < n; ++j) y[j] -= to_long(Int(q * d.hnf(i, j)));
  }
  return y;
}

inline DiscriminantGroup discriminant_group(const GramLattice& l) {
  DiscriminantGroup d;
  d.gram = l.gram;
  d.gram_inv = inverse_q(l.gram);
  int n = l.rank;
  MatZ g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!is_integer(l.gram(i, j))) throw std::invalid_argument("integral Gram required");
      g(i, j) = num(l.gram(i, j));
    }
  d.hnf = hnf_row(g);
  d.order = 1;
  for (int i = 0; i < n; ++i) d.order *= to_long(d.hnf(i, i));
  // enumerate representatives 0 <= y_i < hnf(i,i)
  VecZ y(n, 0);
  while (true) {
    d.elements.push_back(disc_canonical(d, y));
    int i = 0;
    while (i < n && y[i] == to_long(d.hnf(i, i)) - 1) y[i++] = 0;
    if (i == n) break;
    ++y[i];
  }
  std::sort(d.elements.begin(), d.elements.end());
  d.elements.erase(std::unique(d.elements.begin(), d.elements.end()), d.elements.end());
  return d;
}

inline VecZ disc_add(const DiscriminantGroup& d, const VecZ& a, const VecZ& b) {
  VecZ s(a.size());
  for (size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return disc_canonical(d, s);
}

// q(y) = y G^{-1} y mod 2Z, b(y, y') = y G^{-1} y' mod Z (lift v = G^{-1} y).
inline Rat disc_q(const DiscriminantGroup& d, const VecZ& y) {
  Rat s = 0;
  int n = d.gram_inv.rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += d.gram_inv(i, j) * y[i] * y[j];
  // reduce mod 2
  Rat two(2);
  Rat r = s - Rat(2) * floor_rat(s / two);
  return r;
}

inline Rat disc_b(const DiscriminantGroup& d, const VecZ& y, const VecZ& z) {
  Rat s = 0;
  int n = d.gram_inv.rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += d.gram_inv(i, j) * y[i] * z[j];
  return s - floor_rat(s);
}

struct GlueCandidate {
  std::vector<VecZ> elements;  // sorted canonical representatives, incl. 0
  Factors factors;             // invariant factors (at most two)
  long order = 1;
};

// Subgroups of the discriminant group with even q, integral b, <= 2 generators.
inline std::vector<GlueCandidate> glue_candidates(const DiscriminantGroup& d) {
  std::vector<VecZ> good;  // elements with q even
  for (const auto& y : d.elements)
    if (disc_q(d, y) == 0) good.push_back(y);
  std::map<std::vector<VecZ>, GlueCandidate> seen;
  auto close = [&](const VecZ& g1, const VecZ& g2) -> std::optional<GlueCandidate> {
    std::set<VecZ> elems{disc_canonical(d, VecZ(g1.size(), 0))};
    std::vector<VecZ> frontier(elems.begin(), elems.end());
    // generated subgroup
    std::set<VecZ> gens{g1, g2};
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<VecZ> cur(elems.begin(), elems.end());
      for (const auto& e : cur)
        for (const auto& g : gens) {
          VecZ s = disc_add(d, e, g);
          if (elems.insert(s).second) grew = true;
        }
    }
    GlueCandidate c;
    c.elements.assign(elems.begin(), elems.end());
    c.order = long(c.elements.size());
    // all elements even, pairwise b integral
    for (const auto& e : c.elements) {
      if (disc_q(d, e) != 0) return std::nullopt;
      for (const auto& f : c.elements)
        if (disc_b(d, e, f) != 0) return std::nullopt;
    }
    // invariant factors: 2-generated abelian group = Z_exp x Z_{order/exp}
    long exp = 1;
    for (const auto& e : c.elements) {
      long o = 1;
      VecZ cur = e;
      while (!std::all_of(cur.begin(), cur.end(), [](long v) { return v == 0; })) {
        cur = disc_add(d, cur, e);
        ++o;
      }
      exp = std::lcm(exp, o);
    }
    if (exp > 1) {
      if (c.order / exp > 1) c.factors = {c.order / exp, exp};
      else c.factors = {exp};
    }
    if (long(c.factors.size()) > 2) return std::nullopt;
    return c;
  };
  std::vector<GlueCandidate> out;
  VecZ zero(d.gram.rows, 0);
  for (const auto& g1 : good)
    for (const auto& g2 : good) {
      auto c = close(g1, g2);
      if (!c) continue;
      if (!seen.emplace(c->elements, *c).second) continue;
      out.push_back(*c);
    }
  std::sort(out.begin(), out.end(), [](const GlueCandidate& a, const GlueCandidate& b) {
    if (a.order != b.order) return a.order > b.order;
    Factors fa = a.factors, fb = b.factors;
    std::sort(fa.rbegin(), fa.rend());
    std::sort(fb.rbegin(), fb.rend());
    if (fa != fb) return fa > fb;
    return a.elements < b.elements;
  });
  return out;
}

// ---------------------------------------------------------------------------
// The derivation

inline GramLattice e8_lattice() { return gram_of("E8"); }

inline MWDerivation mw_from_T(const LatticeSpec& t_spec) {
  GramLattice t = gram_of(t_spec);
  GramLattice e8 = e8_lattice();
  if (t.rank > 8) throw std::domain_error("T does not embed in E8");
  MWDerivation out;
  if (t.rank == 0) {
    out.mw.lat = e8;
    out.mw.narrow = e8;
    out.t_embedding = Embedding{t, e8, {}};
    out.t_saturated = GramLattice(MatQ(0, 0));
    return out;
  }

  auto finish = [&](const Embedding& t_emb) {
    auto sat = saturate(t_emb);
    GramLattice comp = orthogonal_complement(t_emb);
    comp.torsion.clear();
    MWGroup mw;
    mw.lat = dual(comp);
    mw.tors = sat.glue;
    mw.narrow = comp;
    // discriminant duality inside the unimodular E8
    if (t.rank + mw.lat.rank != 8) throw std::logic_error("rank additivity violated");
    if (det(sat.closure.source) * det(mw.lat) != 1)
      throw std::logic_error("discriminant duality violated");
    Rat tors_sq = det(t) * det(mw.lat);
    if (tors_sq != Rat(group_order(mw.tors)) * Rat(group_order(mw.tors)))
      throw std::logic_error("torsion order inconsistent with determinants");
    out.mw = mw;
    out.t_embedding = t_emb;
    out.glue = sat.glue;
    out.t_saturated = sat.closure.source;
  };

  DiscriminantGroup disc = discriminant_group(t);
  for (const auto& cand : glue_candidates(disc)) {
    // overlattice basis: Z^n together with the lifts G^{-1} y of the glue
    int n = t.rank;
    Int denom = 1;
    std::vector<std::vector<Rat>> lifts;
    for (const auto& y : cand.elements) {
      std::vector<Rat> v(n, Rat(0));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[i] += disc.gram_inv(i, j) * y[j];
      for (const auto& x : v) denom = lcm(denom, den(x));
      lifts.push_back(v);
    }
    MatZ stack(n + int(lifts.size()), n);
    for (int i = 0; i < n; ++i) stack(i, i) = denom;
    for (size_t r = 0; r < lifts.size(); ++r)
      for (int j = 0; j < n; ++j) stack(n + int(r), j) = num(lifts[r][j] * Rat(denom));
    MatZ hb = drop_zero_rows(hnf_row(stack));
    if (hb.rows != n) continue;
    MatQ basis(n, n);  // overlattice basis rows, T coordinates
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) basis(i, j) = Rat(hb(i, j)) / Rat(denom);
    MatQ over_gram = mul(mul(basis, t.gram), transpose(basis));
    if (t.rank == 8) {
      // a full-rank sublattice of a unimodular lattice has square determinant
      Rat dd = det_q(over_gram);
      if (!is_integer(dd) || isqrt_rat(dd) * isqrt_rat(dd) != num(dd)) continue;
    }
    bool integral_even = true;
    for (int i = 0; i < n && integral_even; ++i)
      for (int j = 0; j < n && integral_even; ++j) {
        if (!is_integer(over_gram(i, j))) integral_even = false;
        if (i == j && num(over_gram(i, j)) % 2 != 0) integral_even = false;
      }
    if (!integral_even) continue;
    auto emb = find_first_embedding(GramLattice(over_gram), e8);
    if (!emb) continue;
    // images of the original T basis: e_i = (basis^{-1})_i . rows
    MatQ c = inverse_q(basis);
    std::vector<VecZ> t_images(n, VecZ(8, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (c(i, k) == 0) continue;
        if (!is_integer(c(i, k))) throw std::logic_error("overlattice does not contain T");
        long ci = to_long(num(c(i, k)));
        for (int j = 0; j < 8; ++j) t_images[i][j] += ci * emb->images[k][j];
      }
    finish(Embedding{t, e8, t_images});
    return out;
  }
  throw std::domain_error("T does not embed in E8");
}

// ---------------------------------------------------------------------------
// Sections: incidence bookkeeping and the height pairing

struct SectionClass {
  std::vector<Rat> vec;        // coordinates in the MW_lat basis (bookkeeping)
  std::vector<long> tors;      // coordinates in the torsion factors
  std::map<int, CompElt> inc;  // fiber index in a Config -> component element
  long meets_zero = 0;         // intersection number with the zero section

  bool is_zero_class() const {
    for (const auto& v : vec)
      if (v != 0) return false;
    for (long t : tors)
      if (t) return false;
    for (const auto& [i, e] : inc)
      if (!(e == CompElt{})) return false;
    return meets_zero == 0;
  }
};

inline CompElt incidence_at(const SectionClass& s, int fiber_index) {
  auto it = s.inc.find(fiber_index);
  return it == s.inc.end() ? CompElt{} : it->second;
}

inline Rat contr_sum(const Config& c, const SectionClass& a, const SectionClass& b) {
  Rat s = 0;
  for (int i = 0; i < int(c.fibers.size()); ++i) {
    if (component_group(c.fibers[i]).size() == 1) continue;
    if (a.inc.find(i) == a.inc.end() || b.inc.find(i) == b.inc.end())
      throw std::invalid_argument("missing incidence at reducible fiber " + std::to_string(i));
    s += contr(c.fibers[i], incidence_at(a, i), incidence_at(b, i));
  }
  return s;
}

// Height pairing.  For a == b the mutual intersection is the self-intersection
// -1 of a section; otherwise it must be supplied.
inline Rat height(const SectionClass& a, const SectionClass& b, const Config& c,
                  std::optional<long> mutual = std::nullopt) {
  if (a.is_zero_class() || b.is_zero_class()) return Rat(0);  // zero of the group
  long mu_nu;
  if (&a == &b || (!mutual && a.vec == b.vec && a.tors == b.tors && a.inc == b.inc &&
                   a.meets_zero == b.meets_zero))
    mu_nu = -1;
  else if (mutual)
    mu_nu = *mutual;
  else
    throw std::invalid_argument("mutual intersection number required for distinct sections");
  return Rat(1) + a.meets_zero + b.meets_zero - mu_nu - contr_sum(c, a, b);
}

inline SectionClass zero_section(const Config& c, int lat_rank, const Factors& tors) {
  SectionClass s;
  s.vec.assign(lat_rank, Rat(0));
  s.tors.assign(tors.size(), 0);
  for (int i = 0; i < int(c.fibers.size()); ++i)
    if (component_group(c.fibers[i]).size() > 1) s.inc[i] = CompElt{};
  return s;
}

// Torsion iff the contribution sum is exactly 2 (nonzero case), by the
// vanishing-height criterion; the zero class is trivially torsion.
inline bool torsion_test(const SectionClass& a, const Config& c) {
  if (a.is_zero_class()) return true;
  if (a.meets_zero != 0)
    throw std::invalid_argument("torsion test requires a section disjoint from zero");
  return contr_sum(c, a, a) == 2;
}

// ---------------------------------------------------------------------------
// Component actions and torsion incidences

struct ComponentAction {
  long m = 1;
  bool f0_known = false;
  std::map<CompElt, CompElt> f0_map;     // automorphism of f_0's component group
  std::vector<std::vector<int>> orbits;  // unramified fiber indices, cyclic orbits
};

inline CompElt apply_f0(const ComponentAction& a, const CompElt& e) {
  if (!a.f0_known) throw std::logic_error("f_0 component action not available");
  return a.f0_map.at(e);
}

// Incidence profile of one torsion class at every reducible fiber.
using IncidenceProfile = std::map<int, CompElt>;

struct TorsionSolution {
  // keyed by torsion coordinates (one entry per nonzero class)
  std::map<std::vector<long>, IncidenceProfile> classes;
};

// Enumerates all assignments of incidences to the torsion generators such
// that every nonzero class has contribution sum exactly 2, the assignment is
// invariant under the component action, distinct classes have distinct
// profiles, and profiles add under the group law.
inline std::vector<TorsionSolution> torsion_incidence_solve(const Config& c,
                                                            const Factors& tors,
                                                            const ComponentAction& action) {
  std::vector<TorsionSolution> out;
  if (tors.empty()) {
    out.push_back({});
    return out;
  }
  // slots: marked fiber, orbits (shared value), remaining fibers singly
  struct Slot {
    std::vector<int> fibers;
    CompGroup group;
  };
  std::vector<Slot> slots;
  std::vector<bool> used(c.fibers.size(), false);
  if (c.at_zero >= 0 && component_group(c.fibers[c.at_zero]).size() > 1) {
    slots.push_back({{c.at_zero}, component_group(c.fibers[c.at_zero])});
    used[c.at_zero] = true;
  } else if (c.at_zero >= 0) {
    used[c.at_zero] = true;
  }
  for (const auto& orbit : action.orbits) {
    if (orbit.empty()) continue;
    if (component_group(c.fibers[orbit[0]]).size() == 1) {
      for (int i : orbit) used[i] = true;
      continue;
    }
    slots.push_back({orbit, component_group(c.fibers[orbit[0]])});
    for (int i : orbit) used[i] = true;
  }
  for (int i = 0; i < int(c.fibers.size()); ++i) {
    if (used[i] || component_group(c.fibers[i]).size() == 1) continue;
    slots.push_back({{i}, component_group(c.fibers[i])});
  }

  int ngen = int(tors.size());
  // current assignment: per generator, per slot, a component element
  std::vector<std::vector<CompElt>> gen(ngen, std::vector<CompElt>(slots.size()));
  // all nonzero torsion coordinates
  std::vector<std::vector<long>> coords;
  {
    std::vector<long> cur(ngen, 0);
    while (true) {
      int i = 0;
      while (i < ngen && cur[i] == tors[i] - 1) cur[i++] = 0;
      if (i == ngen) break;
      ++cur[i];
      coords.push_back(cur);
    }
  }

  auto profile_of = [&](const std::vector<long>& coord) {
    IncidenceProfile p;
    for (size_t s = 0; s < slots.size(); ++s) {
      CompElt e;
      for (int g = 0; g < ngen; ++g)
        e = comp_add(slots[s].group, e, comp_mul(slots[s].group, coord[g], gen[g][s]));
      for (int fi : slots[s].fibers) p[fi] = e;
    }
    return p;
  };

  std::function<void(int, int)> rec = [&](int g, int s) {
    if (g == ngen) {
      // validate every nonzero class
      std::set<IncidenceProfile> distinct;
      TorsionSolution sol;
      for (const auto& coord : coords) {
        IncidenceProfile p = profile_of(coord);
        // order consistency: class order must match profile order bound
        Rat sum = 0;
        bool nonneutral = false;
        for (const auto& [fi, e] : p) {
          sum += contr(c.fibers[fi], e, e);
          if (!(e == CompElt{})) nonneutral = true;
        }
        if (sum != 2 || !nonneutral) return;
        // invariance at the marked fiber
        if (c.at_zero >= 0 && action.f0_known && p.count(c.at_zero)) {
          if (!(apply_f0(action, p.at(c.at_zero)) == p.at(c.at_zero))) return;
        }
        if (!distinct.insert(p).second) return;
        sol.classes[coord] = p;
      }
      out.push_back(sol);
      return;
    }
    if (s == int(slots.size())) {
      rec(g + 1, 0);
      return;
    }
    for (const auto& e : comp_elements(slots[s].group)) {
      // generator order must annihilate the slot value
      if (!(comp_mul(slots[s].group, tors[g], e) == CompElt{})) continue;
      gen[g][s] = e;
      rec(g, s + 1);
    }
    gen[g][s] = CompElt{};
  };
  rec(0, 0);
  return out;
}

}  // namespace cyqc
