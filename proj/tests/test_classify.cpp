#include <catch2/catch_amalgamated.hpp>

#include "cyqc/classify.hpp"

using namespace cyqc;

namespace {
struct CaseBundle {
  SigmaPairCase sc;
  KernelData kd;
};
const CaseBundle& bundle(int case_id) {
  static std::map<int, CaseBundle> cache;
  auto it = cache.find(case_id);
  if (it == cache.end()) {
    SigmaPairCase sc = build_sigma_case(case_id);
    KernelData kd = analyze_case(sc);
    it = cache.emplace(case_id, CaseBundle{std::move(sc), std::move(kd)}).first;
  }
  return it->second;
}
}  // namespace

TEST_CASE("lefschetz_dim") {
  CHECK(lefschetz_dim(2, {4}) == 6);            // one involution with 4 fixed points
  CHECK(lefschetz_dim(1, {}) == 10);            // identity only: rank of H^2
  CHECK(lefschetz_dim(9, std::vector<long>(8, 3)) == 2);
  CHECK_THROWS_AS(lefschetz_dim(2, {3}), std::invalid_argument);  // 15/2 not integral
  // solving (12 + S)/9 - 2 - 2 = 0 forces S = 24 for the order-9 group
  CHECK(lefschetz_dim(9, {3, 3, 3, 3, 3, 3, 3, 3}) - 2 == 0);
}

TEST_CASE("stated fixed-point counts reproduce the tabulated dimensions") {
  for (const auto& chk : stated_count_checks()) {
    INFO(chk.config);
    CHECK(parse_config(chk.config).total_euler() == 12);
    CHECK(lefschetz_dim(chk.n, chk.counts) - 2 == chk.expected_dim);
  }
}

TEST_CASE("first-kind table regenerates") {
  auto checks = first_kind_table();
  REQUIRE(checks.size() == 8);
  for (const auto& c : checks) {
    INFO("row " << c.id);
    CHECK(c.all());
  }
}

TEST_CASE("group assembly") {
  // order-4 automorphism with tau^2 the square of the order-4 torsion
  CHECK(assemble_group(2, {4}, {2}) == Factors({2, 4}));
  // d = 1 with full torsion adjoined
  CHECK(assemble_group(2, {2}, {0}) == Factors({2, 2}));
  // the free-part degradation of (Z_2)^3
  CHECK(assemble_group(2, {2, 2}, {0, 0}) == Factors({2, 2}));
  // tau of order 6 through a 2-torsion class at m = 3
  CHECK(assemble_group(3, {2}, {1}) == Factors({6}));
  // cyclic Z_4 via d = 2 when the torsion sits inside the cyclic group
  CHECK(assemble_group(2, {2}, {1}) == Factors({4}));
}

TEST_CASE("second-kind rows regenerate") {
  const auto& d = dataset();
  for (const auto& row : d.second_kind_rows()) {
    INFO("row " << row.id);
    const auto& b = bundle(row.case_id);
    auto c = check_second_kind_row(row, b.sc, b.kd);
    CHECK(c.group_match);
    CHECK(c.d_list_match);
    CHECK(c.dim_match);
    CHECK(c.config_match);
    CHECK(c.columns_match);
  }
}

TEST_CASE("smooth-marked-fiber dimensions by the fixed-point rules") {
  const auto& d = dataset();
  for (int id : {9, 10, 13, 17, 21, 30, 34}) {
    INFO("row " << id);
    const auto& row = d.second_kind(id);
    const auto& b = bundle(row.case_id);
    CHECK(lefschetz_dim_smooth_f0(row, b.sc) == row.dim);
  }
}

TEST_CASE("pairing constraints") {
  const auto& d = dataset();
  // two trivial-action rows always pair
  CHECK(pairing_constraints(false, false, false, false, 1).valid);
  // both marked fibers singular over zero, smooth at infinity: swap pairing
  auto pv = pairing_constraints(d.second_kind(11), d.second_kind(12));
  CHECK(pv.valid);
  // a hypothetical pair with everything singular cannot pair
  CHECK_FALSE(pairing_constraints(true, true, true, true, 2).valid);
}

TEST_CASE("threefold components") {
  auto checks = assemble_threefolds();
  REQUIRE(checks.size() == 22);
  std::map<std::string, std::set<int>> h_by_group;
  long exceptions = 0;
  for (const auto& c : checks) {
    INFO(factors_to_string(c.group) << " m=" << c.m << " cases=" << c.derived_display);
    CHECK(c.h_match);
    CHECK(c.strata_dims_ok);
    CHECK(c.members_ok);
    CHECK(c.pairing_ok);
    CHECK(c.display_match);
    exceptions += long(c.notes.size());
    h_by_group[factors_to_string(c.group)].insert(c.h);
  }
  // one membership anomaly is known (a Z_6 member listed under (Z_2)^2)
  CHECK(exceptions <= 1);
  REQUIRE(h_by_group.size() == 8);
  for (const auto& [g, hs] : h_by_group) CHECK(hs.size() == 1);  // constant per block
  std::multiset<int> hv;
  for (const auto& [g, hs] : h_by_group) hv.insert(*hs.begin());
  CHECK(hv == std::multiset<int>({3, 3, 3, 3, 5, 7, 7, 11}));
}

TEST_CASE("fiber-product Hodge number constant") {
  // rank H^2 of each surface is 10; the fiber product glues them over the
  // base, so h^{1,1} = h^{2,1} = 10 + 10 - 1 = 19 before taking quotients
  CHECK(fiber_product_hodge_number == 19);
  CHECK(lefschetz_dim(1, {}) + lefschetz_dim(1, {}) - 1 == fiber_product_hodge_number);
}
