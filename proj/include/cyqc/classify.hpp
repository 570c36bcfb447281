// Final assembly: the trivial-base-action table, the second-kind tables with
// their mixed groups, moduli dimensions, and the threefold components.
//
// Fixed-point counts feed the dimension formula through two rules:
//   - a translation acting on an I_n fiber through a non-neutral component
//     permutes the components and fixes nothing; through the neutral
//     component it fixes the n nodes;
//   - an automorphism with a linearization of order k on a smooth fixed
//     fiber has |1 - zeta_k|^2 fixed points there (4, 3, 2, 1 for k = 2, 3,
//     4, 6).
// Counts on fibers these rules do not cover are not invented: the stated
// per-configuration counts are kept as data and everything else is checked
// against the tabulated dimensions only.
#pragma once

#include "cyqc/sections.hpp"

namespace cyqc {

// Hodge numbers h^{1,1} = h^{2,1} of the smooth fiber product of two
// rational elliptic surfaces, before taking any quotient.
inline constexpr int fiber_product_hodge_number = 19;

// dim H^2(B)^G = (12 + sum of fixed points) / n - 2
inline long lefschetz_dim(long n, const std::vector<long>& fixed_counts) {
  if (long(fixed_counts.size()) != n - 1)
    throw std::invalid_argument("need one fixed-point count per non-identity element");
  long s = 12;
  for (long f : fixed_counts) {
    if (f < 0) throw std::invalid_argument("negative fixed-point count");
    s += f;
  }
  if (s % n != 0) throw std::invalid_argument("inconsistent fixed-point data");
  return s / n - 2;
}

inline long elliptic_fixed_points(long k) {
  switch (k) {
    case 2: return 4;
    case 3: return 3;
    case 4: return 2;
    case 6: return 1;
    default: throw std::invalid_argument("no elliptic automorphism of order " + std::to_string(k));
  }
}

inline long nodes(const Fiber& f) {
  if (f.kind != Fiber::In) throw std::invalid_argument("node count stated only for I_n fibers");
  return f.n;
}

// Fixed points of a translation with the given incidence profile; only the
// all-I_n rule is stated, other fibers are rejected.
inline long translation_fixed_points(const Config& c, const IncidenceProfile& p) {
  long total = 0;
  for (int i = 0; i < int(c.fibers.size()); ++i) {
    if (c.fibers[i].smooth()) continue;
    CompElt e = p.count(i) ? p.at(i) : CompElt{};
    if (e == CompElt{}) total += nodes(c.fibers[i]);
  }
  return total;
}

// Stated fixed-point data for specializations with star fibers: total counts
// per non-identity element and the resulting dimension.
struct StatedCountCheck {
  const char* config;
  long n;
  std::vector<long> counts;
  long expected_dim;  // first-kind moduli dimension (e = 3)
};

inline const std::vector<StatedCountCheck>& stated_count_checks() {
  static const std::vector<StatedCountCheck> v = {
      {"I1*,I4,I1", 4, {2, 4, 2}, 1},  {"I0*,I2x3", 4, {4, 4, 4}, 2},
      {"I2*,I2x2", 4, {4, 4, 4}, 2},   {"IV*,I3,I1", 3, {3, 3}, 2},
      {"III*,I2,I1", 2, {4}, 4},       {"I4*,I1x2", 2, {4}, 4},
  };
  return v;
}

// ---------------------------------------------------------------------------
// Trivial base action (first kind)

struct FirstKindCheck {
  int id = 0;
  bool group_match = false;
  bool t_match = false;
  bool mw_match = false;
  bool dim_match = false;
  bool rank_matches_dim = false;
  long derived_dim = -1;
  bool all() const { return group_match && t_match && mw_match && dim_match && rank_matches_dim; }
};

inline FirstKindCheck check_first_kind_row(const Table6Row& row) {
  FirstKindCheck c;
  c.id = row.id;
  LatticeSpec t = config_root_lattice(row.config);
  c.t_match = spec_multiset_key(t) == spec_multiset_key(row.t);
  auto der = mw_from_T(t);
  Factors tors = row.tors;
  std::sort(tors.begin(), tors.end());
  c.mw_match = is_isometric(der.mw.lat, gram_of(row.mw)) && der.mw.tors == tors;
  Factors group = row.group;
  std::sort(group.begin(), group.end());
  c.group_match = der.mw.tors == group;  // the group is translation by torsion
  // dimension via the Lefschetz formula and the translation node rule
  ComponentAction trivial;  // identity action, no orbits
  auto sols = torsion_incidence_solve(row.config, der.mw.tors, trivial);
  if (sols.empty()) throw std::logic_error("no torsion incidences for table-6 row");
  std::vector<long> counts;
  for (const auto& [coord, profile] : sols.front().classes)
    counts.push_back(translation_fixed_points(row.config, profile));
  long n = group_order(der.mw.tors);
  long dim_inv = lefschetz_dim(n, counts);
  c.derived_dim = dim_inv - 2;  // e = 3 for trivial base action
  c.dim_match = c.derived_dim == row.dim;
  c.rank_matches_dim = der.mw.lat.rank == row.dim;
  return c;
}

inline std::vector<FirstKindCheck> first_kind_table() {
  std::vector<FirstKindCheck> out;
  for (const auto& row : dataset().table6) out.push_back(check_first_kind_row(row));
  return out;
}

// ---------------------------------------------------------------------------
// Group assembly for the second kind

// Invariant factors of the group generated by the order-n automorphism
// (tau^m = translation by the class c of order d) together with all torsion
// translations.  A (Z_2)^3 never acts freely on the smooth fiber at
// infinity, so it degrades to its free (Z_2)^2 subgroup.
inline Factors assemble_group(long m, const Factors& tors, const std::vector<long>& c) {
  int k = int(tors.size());
  MatZ rel(k + 1, k + 1);
  rel(0, 0) = m;
  for (int i = 0; i < k; ++i) {
    rel(0, i + 1) = -c[i];
    rel(i + 1, i + 1) = tors[i];
  }
  Factors out;
  for (const auto& d : snf_diagonal(rel))
    if (d > 1) out.push_back(to_long(d));
  std::sort(out.begin(), out.end());
  if (out == Factors({2, 2, 2})) out = {2, 2};  // free part of (Z_2)^3
  return out;
}

struct SecondKindCheck {
  int id = 0;
  bool group_match = false;
  bool d_list_match = false;
  bool dim_match = false;
  bool config_match = false;
  bool columns_match = false;  // T, MW, MW^alpha, ker, ker_d1 columns
  long derived_dim = -1;
  bool all() const {
    return group_match && d_list_match && dim_match && config_match && columns_match;
  }
};

inline long quotient_dim_rule(const SigmaPairCase& sc) {
  // positions of the quotient's singular fibers plus the marked point at
  // infinity, modulo the automorphisms of the base
  return long(sc.quotient.config.fibers.size()) + 1 - 3;
}

inline SecondKindCheck check_second_kind_row(const SecondKindRow& row, const SigmaPairCase& sc,
                                             const KernelData& kd) {
  SecondKindCheck c;
  c.id = row.id;
  // group and d realizations
  Factors expect_group = row.group;
  std::sort(expect_group.begin(), expect_group.end());
  std::vector<long> matching_ds;
  for (long d : kd.allowed_d)
    if (assemble_group(sc.m, sc.total.mw.mw.tors, kd.class_by_d.at(d)) == expect_group)
      matching_ds.push_back(d);
  std::sort(matching_ds.rbegin(), matching_ds.rend());
  std::vector<long> expect_ds = row.ds;
  std::sort(expect_ds.rbegin(), expect_ds.rend());
  c.d_list_match = matching_ds == expect_ds;
  c.group_match = !matching_ds.empty();
  // dimension via the quotient fiber-position rule
  c.derived_dim = quotient_dim_rule(sc);
  c.dim_match = c.derived_dim == row.dim;
  // configuration (multiset and marked fiber)
  Fiber f0_row = row.config.at_zero >= 0 ? row.config.fibers[row.config.at_zero] : fiber_I(0);
  Fiber f0_sc =
      sc.total.config.at_zero >= 0 ? sc.total.config.fibers[sc.total.config.at_zero] : fiber_I(0);
  c.config_match =
      fiber_multiset(sc.total.config) == fiber_multiset(row.config) && f0_row == f0_sc;
  // lattice columns
  bool cols = spec_multiset_key(sc.total.t) == spec_multiset_key(row.t);
  Factors tors = row.tors;
  std::sort(tors.begin(), tors.end());
  cols = cols && is_isometric(sc.total.mw.mw.lat, gram_of(row.mw)) &&
         sc.total.mw.mw.tors == tors;
  cols = cols && is_isometric(GramLattice(sc.fixed_lat.gram, sc.fixed_tors),
                              GramLattice(gram_of(row.mw_alpha).gram, row.mw_alpha_tors));
  cols = cols && is_isometric(GramLattice(kd.kernel.gram, kd.kernel_tors),
                              GramLattice(gram_of(row.ker).gram, row.ker_tors));
  if (row.has_ker_d1)
    cols = cols && is_isometric(GramLattice(kd.kernel_d1.gram, kd.kernel_d1_tors),
                                GramLattice(gram_of(row.ker_d1).gram, row.ker_d1_tors));
  c.columns_match = cols;
  return c;
}

// Lefschetz dimension for the generic rows with a smooth marked fiber: the
// base-active elements act on the fixed smooth fiber with the elliptic
// counts, pure translations follow the node rule.
inline long lefschetz_dim_smooth_f0(const SecondKindRow& row, const SigmaPairCase& sc) {
  const Factors& tors = sc.total.mw.mw.tors;
  ComponentAction act = sc.action;
  auto sols = torsion_incidence_solve(sc.total.config, tors, act);
  if (sols.empty()) throw std::logic_error("no torsion incidences");
  const auto& profile = sols.front();
  long n = row.m * group_order(tors);
  std::vector<long> counts;
  std::vector<long> tcur(tors.size(), 0);
  std::function<void(size_t, long)> loop = [&](size_t i, long a) {
    if (i == tors.size()) {
      bool torsion_zero = std::all_of(tcur.begin(), tcur.end(), [](long v) { return v == 0; });
      if (a == 0 && torsion_zero) return;  // identity
      if (a == 0) {
        counts.push_back(translation_fixed_points(sc.total.config, profile.classes.at(tcur)));
      } else {
        long k = row.m / std::gcd(a, row.m);
        counts.push_back(elliptic_fixed_points(k));
      }
      return;
    }
    for (long v = 0; v < tors[i]; ++v) {
      tcur[i] = v;
      loop(i + 1, a);
    }
  };
  for (long a = 0; a < row.m; ++a) loop(0, a);
  return lefschetz_dim(n, counts) - 1;  // e = 1 for a non-trivial base action
}

// ---------------------------------------------------------------------------
// Threefold components

struct PairingVerdict {
  bool valid = false;
  std::string reason;
};

// Marked-fiber smoothness matching, with the 0 <-> infinity swap allowed.
inline PairingVerdict pairing_constraints(bool left_f0_singular, bool left_finf_singular,
                                          bool right_f0_singular, bool right_finf_singular,
                                          long m) {
  PairingVerdict v;
  if (m == 1) {
    v.valid = true;
    v.reason = "trivial base action: singular loci can always be separated";
    return v;
  }
  bool direct = !(left_f0_singular && right_f0_singular) &&
                !(left_finf_singular && right_finf_singular);
  bool swapped = !(left_f0_singular && right_finf_singular) &&
                 !(left_finf_singular && right_f0_singular);
  v.valid = direct || swapped;
  if (direct)
    v.reason = "marked fibers pair smooth-against-singular as given";
  else if (swapped)
    v.reason = "marked fibers pair after exchanging 0 and infinity";
  else
    v.reason = "both fixed fibers singular on both sides";
  return v;
}

inline PairingVerdict pairing_constraints(const SecondKindRow& left, const SecondKindRow& right) {
  if (left.group != right.group || left.m != right.m) {
    PairingVerdict v;
    v.reason = "rows do not share the same group and base order";
    return v;
  }
  return pairing_constraints(left.config.at_zero >= 0, !left.config.at_infinity.smooth(),
                             right.config.at_zero >= 0, !right.config.at_infinity.smooth(),
                             left.m);
}

struct ThreefoldCheck {
  Factors group;
  long m = 0;
  int h = 0;
  bool h_match = false;        // h = dim_left + dim_right + e for the top stratum
  bool strata_dims_ok = false; // each stratum one dimension below the previous
  bool members_ok = false;     // members exist, share m, groups embed (exceptions noted)
  bool pairing_ok = false;
  bool display_match = false;  // regenerated stratum string equals the transcription
  std::string derived_display;
  std::vector<std::string> notes;
  bool all() const {
    return h_match && strata_dims_ok && members_ok && pairing_ok && display_match;
  }
};

inline int row_dim(int id) {
  const auto& d = dataset();
  if (id <= 8) return d.table6.at(id - 1).dim;
  return d.second_kind(id).dim;
}

inline Factors row_group(int id) {
  const auto& d = dataset();
  if (id <= 8) return d.table6.at(id - 1).group;
  return d.second_kind(id).group;
}

// a group with invariant factors `sub` embeds into one with factors `super`
inline bool group_embeds(Factors sub, Factors super) {
  std::sort(sub.rbegin(), sub.rend());
  std::sort(super.rbegin(), super.rend());
  if (sub.size() > super.size()) return false;
  for (size_t i = 0; i < sub.size(); ++i)
    if (super[i] % sub[i] != 0) return false;
  return true;
}

inline std::string render_case_display(const std::vector<std::vector<Table10Row::Item>>& strata) {
  std::string out;
  for (size_t s = 0; s < strata.size(); ++s) {
    if (s) out += ";";
    std::string part;
    for (size_t i = 0; i < strata[s].size();) {
      const auto& it = strata[s][i];
      if (!part.empty()) part += ",";
      if (it.left != it.right) {
        part += std::to_string(it.left) + "x" + std::to_string(it.right);
        ++i;
        continue;
      }
      // collapse runs of length >= 3
      size_t j = i;
      while (j + 1 < strata[s].size() && strata[s][j + 1].left == strata[s][j].left + 1 &&
             strata[s][j + 1].left == strata[s][j + 1].right)
        ++j;
      if (j - i + 1 >= 3) {
        part += std::to_string(it.left) + "-" + std::to_string(strata[s][j].left);
        i = j + 1;
      } else {
        part += std::to_string(it.left);
        ++i;
      }
    }
    out += part;
  }
  return out;
}

inline ThreefoldCheck check_threefold_row(const Table10Row& row) {
  const auto& d = dataset();
  ThreefoldCheck c;
  c.group = row.group;
  c.m = row.m;
  c.h = row.h;
  long e = row.m == 1 ? 3 : 1;
  // h from the top stratum
  c.h_match = true;
  for (const auto& item : row.strata.front())
    if (row_dim(item.left) + row_dim(item.right) + e != row.h) c.h_match = false;
  // strata dims decrease by one, uniformly inside a stratum
  c.strata_dims_ok = true;
  int top = row_dim(row.strata.front().front().left);
  for (size_t s = 0; s < row.strata.size(); ++s)
    for (const auto& item : row.strata[s]) {
      if (row_dim(item.left) != top - int(s) || row_dim(item.right) != top - int(s))
        c.strata_dims_ok = false;
    }
  // membership
  c.members_ok = true;
  c.pairing_ok = true;
  std::set<int> member_ids;
  for (const auto& stratum : row.strata)
    for (const auto& item : stratum) {
      member_ids.insert(item.left);
      member_ids.insert(item.right);
      auto pv = item.left <= 8 ? PairingVerdict{true, "trivial base action"}
                               : pairing_constraints(d.second_kind(item.left),
                                                     d.second_kind(item.right));
      if (!pv.valid) c.pairing_ok = false;
    }
  for (int id : member_ids) {
    if (row.m == 1) {
      if (id > 8 || row_group(id) != row.group) c.members_ok = false;
      continue;
    }
    const auto& member = d.second_kind(id);
    if (member.m != row.m) c.members_ok = false;
    if (!group_embeds(row.group, member.group))
      c.notes.push_back("row " + std::to_string(id) +
                        ": member group does not contain the block group");
  }
  c.derived_display = render_case_display(row.strata);
  c.display_match = c.derived_display == row.cases;
  return c;
}

inline std::vector<ThreefoldCheck> assemble_threefolds() {
  std::vector<ThreefoldCheck> out;
  for (const auto& row : dataset().table10) out.push_back(check_threefold_row(row));
  return out;
}

}  // namespace cyqc
