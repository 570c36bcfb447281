// Suitable sigma-pairs: pull back a suitable quotient surface of order m,
// assemble the case data, and encode the automorphism action on fiber
// components needed by the section analysis.
//
// The action on the components of the marked fiber f_0 is case data keyed by
// (quotient f_0 kind, m); the entries are fixed by the structure of the
// covering at the ramified point: an I_{mM} pulled back from I_M* at m = 2
// carries the negation i -> -i, the quotient of I_0* pulled back from III*
// fixes one end and swaps the other two, and the pullbacks III (from III* at
// m = 3) and IV (from IV* at m = 2) keep every component.  For other cases
// the non-neutral action on f_0 is not needed downstream and is left unset.
// Unramified fibers are grouped into m-orbits permuted cyclically.
#pragma once

#include "cyqc/dataset.hpp"
#include "cyqc/mw.hpp"

namespace cyqc {

struct SurfaceCase {
  Config config;
  LatticeSpec t;
  MWDerivation mw;
};

struct SigmaPairCase {
  int id = 0;  // table-4 case number when built from the dataset
  long m = 1;
  SurfaceCase quotient;
  SurfaceCase total;
  GramLattice fixed_lat;  // invariant sublattice: quotient MW_lat scaled by m
  Factors fixed_tors;     // plus the quotient torsion
  ComponentAction action;
};

inline LatticeSpec config_root_lattice(const Config& c) {
  LatticeSpec t;
  if (c.at_zero >= 0) t = spec_concat(t, root_lattice(c.fibers[c.at_zero]));
  for (int i = 0; i < int(c.fibers.size()); ++i)
    if (i != c.at_zero) t = spec_concat(t, root_lattice(c.fibers[i]));
  return t;
}

inline std::optional<std::map<CompElt, CompElt>> f0_action_rule(const Fiber& quotient_f0,
                                                                const Fiber& cover_f0, long m) {
  std::map<CompElt, CompElt> map;
  auto g = component_group(cover_f0);
  if (quotient_f0.kind == Fiber::Instar && m == 2 && cover_f0.kind == Fiber::In) {
    for (const auto& e : comp_elements(g)) map[e] = comp_neg(g, e);
    return map;
  }
  if (quotient_f0.kind == Fiber::IIIstar && m == 3 && cover_f0.kind == Fiber::III) {
    for (const auto& e : comp_elements(g)) map[e] = e;
    return map;
  }
  if (quotient_f0.kind == Fiber::IVstar && m == 2 && cover_f0.kind == Fiber::IV) {
    for (const auto& e : comp_elements(g)) map[e] = e;
    return map;
  }
  if (quotient_f0.kind == Fiber::IIIstar && m == 2 && cover_f0.kind == Fiber::Instar &&
      cover_f0.n == 0) {
    // fixes the neutral end and the tail end, swaps the two fork ends
    map[CompElt{0, 0}] = CompElt{0, 0};
    map[CompElt{1, 0}] = CompElt{1, 0};
    map[CompElt{0, 1}] = CompElt{1, 1};
    map[CompElt{1, 1}] = CompElt{0, 1};
    return map;
  }
  return std::nullopt;
}

inline SigmaPairCase build_sigma_pair(const Config& quotient_config, long m) {
  auto report = check_suitable_quotient(quotient_config, m);
  if (!report.suitable)
    throw std::invalid_argument("quotient not suitable of order " + std::to_string(m) + ": " +
                                report.reason);
  if (!quotient_config.at_infinity.smooth())
    throw std::invalid_argument("fiber at infinity must be smooth for a sigma-pair");
  if (quotient_config.at_zero < 0)
    throw std::invalid_argument("quotient needs a marked fiber over 0");

  SigmaPairCase out;
  out.m = m;
  out.quotient.config = quotient_config;
  out.quotient.t = config_root_lattice(quotient_config);
  out.quotient.mw = mw_from_T(out.quotient.t);

  const Fiber f0q = quotient_config.fibers[quotient_config.at_zero];
  Fiber f0t = pullback(f0q, m);
  Config total;
  if (!f0t.smooth()) {
    total.at_zero = 0;
    total.fibers.push_back(f0t);
  }
  out.action.m = m;
  for (int i = 0; i < int(quotient_config.fibers.size()); ++i) {
    if (i == quotient_config.at_zero) continue;
    std::vector<int> orbit;
    for (long k = 0; k < m; ++k) {
      orbit.push_back(int(total.fibers.size()));
      total.fibers.push_back(quotient_config.fibers[i]);
    }
    out.action.orbits.push_back(orbit);
  }
  if (total.total_euler() != 12) throw std::logic_error("pullback Euler sum mismatch");
  out.total.config = total;
  out.total.t = config_root_lattice(total);
  out.total.mw = mw_from_T(out.total.t);

  out.fixed_lat = scale(out.quotient.mw.mw.lat, Rat(m));
  out.fixed_tors = out.quotient.mw.mw.tors;
  if (auto rule = f0_action_rule(f0q, f0t, m)) {
    out.action.f0_known = true;
    out.action.f0_map = *rule;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generic configurations from the dataset columns

// Generic fiber realizing a root-lattice summand.
inline Fiber generic_fiber(const LatticeSpec::Summand& s) {
  if (s.kind != LatticeSpec::Summand::ADE || s.dualize || s.scale != 1)
    throw std::invalid_argument("not a plain root summand");
  switch (s.family) {
    case 'A': return fiber_I(s.n + 1);
    case 'D': return fiber_Istar(s.n - 4);
    case 'E':
      if (s.n == 6) return Fiber{Fiber::IVstar, 0};
      if (s.n == 7) return Fiber{Fiber::IIIstar, 0};
      return Fiber{Fiber::IIstar, 0};
  }
  throw std::invalid_argument("bad summand");
}

// Rebuilds the generic quotient configuration of a table-4 case from its
// transcribed columns (m, quotient f_0, cover T).
inline Config quotient_config_of(const Table4Row& row) {
  // unramified root summands = T minus the root lattice of the cover f_0
  Fiber f0t = pullback(row.f0_quotient, row.m);
  std::multiset<std::string> t_parts, f0_parts;
  for (const auto& s : row.t_cover.summands) {
    LatticeSpec one;
    one.summands.push_back(s);
    t_parts.insert(spec_to_string(one));
  }
  for (const auto& s : root_lattice(f0t).summands) {
    LatticeSpec one;
    one.summands.push_back(s);
    f0_parts.insert(spec_to_string(one));
  }
  for (const auto& p : f0_parts) {
    auto it = t_parts.find(p);
    if (it == t_parts.end())
      throw std::invalid_argument("T does not contain the marked-fiber root lattice");
    t_parts.erase(it);
  }
  std::multiset<Fiber> unram;
  long chi = euler(f0t);
  for (const auto& p : t_parts) {
    Fiber f = generic_fiber(parse_spec(p).summands.at(0));
    unram.insert(f);
    chi += euler(f);
  }
  long fill = 12 - chi;
  if (fill < 0 || fill % row.m != 0)
    throw std::invalid_argument("cannot fill with I_1 fibers in m-orbits");
  Config q;
  q.at_zero = 0;
  q.fibers.push_back(row.f0_quotient);
  std::map<Fiber, long> counts;
  for (const auto& f : unram) ++counts[f];
  for (const auto& [f, n] : counts) {
    if (n % row.m != 0) throw std::invalid_argument("unramified fibers not in m-orbits");
    for (long i = 0; i < n / row.m; ++i) q.fibers.push_back(f);
  }
  for (long i = 0; i < fill / row.m; ++i) q.fibers.push_back(fiber_I(1));
  if (q.total_euler() != 12) throw std::invalid_argument("quotient Euler sum mismatch");
  return q;
}

inline SigmaPairCase build_sigma_case(const Table4Row& row) {
  SigmaPairCase c = build_sigma_pair(quotient_config_of(row), row.m);
  c.id = row.id;
  return c;
}

inline SigmaPairCase build_sigma_case(int case_id) {
  return build_sigma_case(dataset().sigma_case(case_id));
}

// ---------------------------------------------------------------------------
// Table regeneration with per-cell match flags

struct Table4Check {
  int id = 0;
  bool suitable = false;
  bool f0_cover_match = false;
  bool mw_quotient_match = false;
  bool tors_quotient_match = false;
  bool mw_cover_match = false;
  bool tors_cover_match = false;
  bool t_match = false;
  std::string quotient_config;
  std::string cover_config;

  bool all() const {
    return suitable && f0_cover_match && mw_quotient_match && tors_quotient_match &&
           mw_cover_match && tors_cover_match && t_match;
  }
};

inline Table4Check check_table4_row(const Table4Row& row) {
  Table4Check c;
  c.id = row.id;
  Config q = quotient_config_of(row);
  c.suitable = check_suitable_quotient(q, row.m).suitable;
  SigmaPairCase sc = build_sigma_pair(q, row.m);
  c.quotient_config = config_to_string(q);
  c.cover_config = config_to_string(sc.total.config);
  Fiber f0t = sc.total.config.at_zero >= 0 ? sc.total.config.fibers[sc.total.config.at_zero]
                                           : fiber_I(0);
  c.f0_cover_match = f0t == row.f0_cover;
  c.mw_quotient_match = is_isometric(sc.quotient.mw.mw.lat, gram_of(row.mw_quotient));
  Factors tq = row.tors_quotient;
  std::sort(tq.begin(), tq.end());
  c.tors_quotient_match = sc.quotient.mw.mw.tors == tq;
  c.mw_cover_match = is_isometric(sc.total.mw.mw.lat, gram_of(row.mw_cover));
  Factors tc = row.tors_cover;
  std::sort(tc.begin(), tc.end());
  c.tors_cover_match = sc.total.mw.mw.tors == tc;
  c.t_match = spec_multiset_key(sc.total.t) == spec_multiset_key(row.t_cover);
  return c;
}

inline std::vector<Table4Check> regenerate_table4() {
  std::vector<Table4Check> out;
  for (const auto& row : dataset().table4) out.push_back(check_table4_row(row));
  return out;
}

}  // namespace cyqc
