#include <catch2/catch_amalgamated.hpp>

#include "cyqc/sigma.hpp"

using namespace cyqc;

TEST_CASE("build_sigma_pair: spot cases") {
  // order 6, marked II*: cover is unramified elsewhere, E8 Mordell-Weil
  auto c1 = build_sigma_pair(parse_config("II*@0,I1x2"), 6);
  CHECK(c1.total.config.at_zero == -1);
  CHECK(is_isometric(c1.total.mw.mw.lat, gram_of("E8")));
  CHECK(c1.total.config.total_euler() == 12);
  CHECK(fiber_multiset(c1.total.config) == fiber_multiset(parse_config("I1x12")));

  // order 2, marked I_4*: cover has I_8 over 0 and T = A_7
  auto c18 = build_sigma_pair(parse_config("I4*@0,I1x2"), 2);
  REQUIRE(c18.total.config.at_zero >= 0);
  CHECK(c18.total.config.fibers[c18.total.config.at_zero] == fiber_I(8));
  CHECK(spec_multiset_key(c18.total.t) == spec_multiset_key(parse_spec("A7")));
  CHECK(is_isometric(c18.total.mw.mw.lat, gram_of("dual(A1)")));
  CHECK(c18.total.mw.mw.tors == Factors{2});
  CHECK(c18.action.f0_known);
  // negation on the octagon of components: order two, neutral fixed
  auto g8 = component_group(fiber_I(8));
  CHECK(c18.action.f0_map.at(CompElt{0, 0}) == CompElt{0, 0});
  CHECK(c18.action.f0_map.at(CompElt{3, 0}) == CompElt{5, 0});
  for (const auto& e : comp_elements(g8))
    CHECK(c18.action.f0_map.at(c18.action.f0_map.at(e)) == e);

  // order 3, marked IV* with a torsion quotient: case 11
  auto c11 = build_sigma_pair(parse_config("IV*@0,I3,I1"), 3);
  CHECK(is_isometric(c11.total.mw.mw.lat, gram_of("dual(A2)")));
  CHECK(c11.total.mw.mw.tors == Factors{3});
  CHECK(c11.quotient.mw.mw.tors == Factors{3});

  // unsuitable input names the violated condition
  CHECK_THROWS_WITH(build_sigma_pair(parse_config("IV*@0,I2,I1x2"), 5),
                    Catch::Matchers::ContainsSubstring("deficiency"));
}

TEST_CASE("quotient configurations derived from table 4") {
  const auto& d = dataset();
  // known quotient configurations
  CHECK(fiber_multiset(quotient_config_of(d.sigma_case(5))) ==
        fiber_multiset(parse_config("III*,I2,I1")));
  CHECK(fiber_multiset(quotient_config_of(d.sigma_case(30))) ==
        fiber_multiset(parse_config("I0*,I3,I1x3")));
  CHECK(fiber_multiset(quotient_config_of(d.sigma_case(34))) ==
        fiber_multiset(parse_config("I0*x2")));
  for (const auto& row : d.table4) {
    Config q = quotient_config_of(row);
    CHECK(q.total_euler() == 12);
    CHECK(check_suitable_quotient(q, row.m).suitable);
    // total deficiency over the quotient, both ramified points marked, is zero
    long total = deficiency(row.f0_quotient, row.m, true) +
                 deficiency(q.at_infinity, row.m, true);
    for (int i = 0; i < int(q.fibers.size()); ++i)
      if (i != q.at_zero) total += deficiency(q.fibers[i], row.m, false);
    CHECK(total == 0);
  }
}

TEST_CASE("regenerate_table4: all 34 rows match the transcription") {
  auto checks = regenerate_table4();
  REQUIRE(checks.size() == 34);
  for (const auto& c : checks) {
    INFO("case " << c.id);
    CHECK(c.all());
  }
  // case 30 carries the corrected quotient lattice
  const auto& row30 = dataset().sigma_case(30);
  CHECK(is_isometric(gram_of(row30.mw_quotient), gram_of("1/6*[2,1;1,2]")));
  // case 34 cover: rank 0 with (Z2)^2
  auto c34 = build_sigma_case(34);
  CHECK(c34.total.mw.mw.lat.rank == 0);
  CHECK(c34.total.mw.mw.tors == Factors({2, 2}));
}

TEST_CASE("built cases agree with the second-kind rows") {
  const auto& d = dataset();
  std::map<int, SigmaPairCase> cases;
  for (const auto& row : d.second_kind_rows()) {
    auto it = cases.find(row.case_id);
    if (it == cases.end())
      it = cases.emplace(row.case_id, build_sigma_case(row.case_id)).first;
    const auto& sc = it->second;
    INFO("row " << row.id << " case " << row.case_id);
    CHECK(sc.m == row.m);
    CHECK(fiber_multiset(sc.total.config) == fiber_multiset(row.config));
    // marked fibers agree
    Fiber f0_row = row.config.at_zero >= 0 ? row.config.fibers[row.config.at_zero] : fiber_I(0);
    Fiber f0_sc = sc.total.config.at_zero >= 0
                      ? sc.total.config.fibers[sc.total.config.at_zero]
                      : fiber_I(0);
    CHECK(f0_row == f0_sc);
    CHECK(spec_multiset_key(sc.total.t) == spec_multiset_key(row.t));
    CHECK(is_isometric(sc.total.mw.mw.lat, gram_of(row.mw)));
    Factors tors = row.tors;
    std::sort(tors.begin(), tors.end());
    CHECK(sc.total.mw.mw.tors == tors);
    // invariant sublattice column
    GramLattice mwa(sc.fixed_lat.gram, sc.fixed_tors);
    GramLattice expect(gram_of(row.mw_alpha).gram, row.mw_alpha_tors);
    CHECK(is_isometric(mwa, expect));
  }
}

TEST_CASE("component action bookkeeping") {
  auto c22 = build_sigma_case(22);  // I_2* at order 2: I_4 over 0, four A_1 orbits
  CHECK(c22.action.f0_known);
  CHECK(c22.action.orbits.size() >= 2);
  for (const auto& orbit : c22.action.orbits) CHECK(long(orbit.size()) == c22.m);
  // marked-fiber action: i -> -i on the 4-cycle
  CHECK(c22.action.f0_map.at(CompElt{1, 0}) == CompElt{3, 0});
  CHECK(c22.action.f0_map.at(CompElt{2, 0}) == CompElt{2, 0});

  auto c14 = build_sigma_case(14);  // III* at order 2: I_0* over 0
  CHECK(c14.action.f0_known);
  int fixed_ends = 0, swapped = 0;
  for (const auto& e : comp_elements(component_group(fiber_Istar(0)))) {
    if (e == CompElt{}) continue;
    if (c14.action.f0_map.at(e) == e) ++fixed_ends;
    else ++swapped;
  }
  CHECK(fixed_ends == 1);
  CHECK(swapped == 2);

  auto c2 = build_sigma_case(2);  // f_0 of the cover is irreducible: no action needed
  CHECK_FALSE(c2.action.f0_known);
}
