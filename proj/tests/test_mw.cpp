#include <catch2/catch_amalgamated.hpp>

#include "cyqc/dataset.hpp"
#include "cyqc/mw.hpp"

using namespace cyqc;

TEST_CASE("mw_from_T: basic derivations") {
  auto zero = mw_from_T(parse_spec("0"));
  CHECK(is_isometric(zero.mw.lat, gram_of("E8")));
  CHECK(zero.mw.tors.empty());

  auto a7 = mw_from_T(parse_spec("A7"));
  CHECK(is_isometric(a7.mw.lat, gram_of("dual(A1)")));
  CHECK(a7.mw.tors == Factors{2});

  auto c14 = mw_from_T(parse_spec("D4+A1^2"));
  CHECK(is_isometric(c14.mw.lat, gram_of("dual(A1)^2")));
  CHECK(c14.mw.tors == Factors{2});

  auto a14 = mw_from_T(parse_spec("A1^4"));
  CHECK(is_isometric(a14.mw.lat, gram_of("dual(D4)")));
  CHECK(a14.mw.tors == Factors{2});
  CHECK(saturate(a14.t_embedding).glue == Factors{2});

  auto a23 = mw_from_T(parse_spec("A2^3"));
  CHECK(a23.mw.tors == Factors{3});
  CHECK(saturate(a23.t_embedding).glue == Factors{3});

  // the corrected quotient lattice of case 30
  auto c30 = mw_from_T(parse_spec("D4+A2"));
  CHECK(is_isometric(c30.mw.lat, gram_of("1/6*[2,1;1,2]")));
  CHECK_FALSE(is_isometric(c30.mw.lat, gram_of("dual(A1)+U1/6")));

  // a torsion order that exceeds two cyclic factors cannot occur
  auto c27 = mw_from_T(parse_spec("A3^2+A1"));
  CHECK(c27.mw.tors == Factors{4});  // not Z2 x Z2

  CHECK_THROWS_AS(mw_from_T(parse_spec("D7+A1")), std::domain_error);  // det 8 not a square
}

TEST_CASE("mw_from_T: every dataset row reproduces its MW columns") {
  const auto& d = dataset();
  auto check_row = [&](const LatticeSpec& t, const LatticeSpec& mw_expected,
                       const Factors& tors_expected, const std::string& where) {
    INFO(where);
    auto der = mw_from_T(t);
    GramLattice t_gram = gram_of(t);
    CHECK(t_gram.rank + der.mw.lat.rank == 8);
    CHECK(is_isometric(der.mw.lat, gram_of(mw_expected)));
    Factors expect = tors_expected;
    std::sort(expect.begin(), expect.end());
    CHECK(der.mw.tors == expect);
    CHECK(det(t_gram) * det(der.mw.lat) ==
          Rat(group_order(der.mw.tors)) * Rat(group_order(der.mw.tors)));
    REQUIRE(der.mw.narrow.has_value());
    CHECK(is_isometric(*der.mw.narrow, dual(der.mw.lat)));
  };
  for (const auto& r : d.table4) {
    std::string tag = "table4 case " + std::to_string(r.id);
    check_row(r.t_cover, r.mw_cover, r.tors_cover, tag + " cover");
  }
  for (const auto& r : d.table6)
    check_row(r.t, r.mw, r.tors, "table6 row " + std::to_string(r.id));
  for (const auto& r : d.second_kind_rows())
    check_row(r.t, r.mw, r.tors, "row " + std::to_string(r.id));
}

TEST_CASE("height pairing") {
  Config c = parse_config("I2@0,I2x4,I1x2");
  auto sigma = zero_section(c, 3, {2});
  CHECK(height(sigma, sigma, c) == 0);

  // a minimal section: meets three non-neutral I_2 components, disjoint from 0
  SectionClass xi = sigma;
  xi.vec = {Rat(1), Rat(0), Rat(0)};
  xi.inc[c.at_zero] = CompElt{1, 0};
  xi.inc[1] = CompElt{1, 0};
  xi.inc[2] = CompElt{1, 0};
  CHECK(contr_sum(c, xi, xi) == rat(3, 2));
  CHECK(height(xi, xi, c) == rat(1, 2));
  CHECK(height(xi, xi, c) == Rat(2) - contr_sum(c, xi, xi));

  // distinct sections need the mutual intersection number
  SectionClass eta = sigma;
  eta.tors = {1};
  eta.inc[1] = CompElt{1, 0};
  eta.inc[2] = CompElt{1, 0};
  eta.inc[3] = CompElt{1, 0};
  eta.inc[4] = CompElt{1, 0};
  CHECK_THROWS(height(xi, eta, c));
  CHECK(height(xi, eta, c, 0) == Rat(1) - contr_sum(c, xi, eta));
}

TEST_CASE("torsion_test") {
  // order-2 section on I_8 must meet the middle component
  Config c18 = parse_config("I8@0,I1x4");
  auto sigma = zero_section(c18, 1, {2});
  CHECK(torsion_test(sigma, c18));
  SectionClass eta = sigma;
  eta.tors = {1};
  eta.inc[c18.at_zero] = CompElt{4, 0};
  CHECK(contr_sum(c18, eta, eta) == 2);
  CHECK(torsion_test(eta, c18));
  SectionClass bad = sigma;
  bad.vec = {Rat(1)};
  CHECK_FALSE(torsion_test(bad, c18));  // all-neutral non-zero class

  // order-2 section on III + three A_1 fibers
  Config c8 = parse_config("III@0,I2x3,I1x3");
  auto s8 = zero_section(c8, 4, {2});
  SectionClass eta8 = s8;
  eta8.tors = {1};
  for (int i = 0; i < 4; ++i) eta8.inc[i] = CompElt{1, 0};
  CHECK(torsion_test(eta8, c8));
}

TEST_CASE("torsion incidences: unique solutions up to relabeling") {
  // I_8 with Z_2: the torsion section must meet component 4
  Config c18 = parse_config("I8@0,I1x4");
  ComponentAction act;
  act.m = 2;
  act.f0_known = true;
  auto g8 = component_group(fiber_I(8));
  for (const auto& e : comp_elements(g8)) act.f0_map[e] = comp_neg(g8, e);
  auto sols = torsion_incidence_solve(c18, {2}, act);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].classes.at({1}).at(c18.at_zero) == CompElt{4, 0});

  // IV + two A_2 orbit fibers with Z_3 (the order-3 classes pair up)
  Config c17 = parse_config("IV@0,I3x2,I1x2");
  ComponentAction a17;
  a17.m = 2;
  a17.f0_known = true;
  for (const auto& e : comp_elements(component_group(Fiber{Fiber::IV, 0})))
    a17.f0_map[e] = e;
  std::vector<int> orbit;
  for (int i = 0; i < int(c17.fibers.size()); ++i)
    if (i != c17.at_zero && c17.fibers[i] == fiber_I(3)) orbit.push_back(i);
  a17.orbits.push_back(orbit);
  auto s17 = torsion_incidence_solve(c17, {3}, a17);
  REQUIRE(!s17.empty());
  for (const auto& sol : s17) {
    const auto& eta = sol.classes.at({1});
    const auto& eta2 = sol.classes.at({2});
    // eta and its double sit on opposite non-neutral components of f_0
    CHECK(!(eta.at(c17.at_zero) == CompElt{}));
    CHECK(comp_add(component_group(Fiber{Fiber::IV, 0}), eta.at(c17.at_zero),
                   eta2.at(c17.at_zero)) == CompElt{});
    // orbit fibers carry the same incidence
    CHECK(eta.at(orbit[0]) == eta.at(orbit[1]));
  }

  // trivial torsion: one empty solution
  auto none = torsion_incidence_solve(c18, {}, act);
  REQUIRE(none.size() == 1);
  CHECK(none[0].classes.empty());
}

TEST_CASE("height vanishes exactly on torsion-type incidence profiles") {
  // over all single-section incidence assignments on a fixed configuration,
  // height 0 (with the section disjoint from zero) is equivalent to the
  // contribution sum hitting 2 exactly
  Config c = parse_config("I4@0,I2x2,I1x4");
  std::vector<int> reducible;
  for (int i = 0; i < int(c.fibers.size()); ++i)
    if (component_group(c.fibers[i]).size() > 1) reducible.push_back(i);
  std::function<void(size_t, SectionClass&)> rec = [&](size_t k, SectionClass& s) {
    if (k == reducible.size()) {
      if (s.is_zero_class()) return;
      CHECK((height(s, s, c) == 0) == torsion_test(s, c));
      return;
    }
    for (const auto& e : comp_elements(component_group(c.fibers[reducible[k]]))) {
      s.inc[reducible[k]] = e;
      rec(k + 1, s);
    }
  };
  SectionClass s = zero_section(c, 1, {2});
  s.vec = {Rat(1)};  // non-zero class marker
  rec(0, s);
}

TEST_CASE("dataset override via CYQC_DATASET") {
  setenv("CYQC_DATASET", CYQC_TEST_DATA_DIR, 1);
  auto d = load_dataset();
  unsetenv("CYQC_DATASET");
  auto embedded = load_dataset();
  CHECK(d.checksum == embedded.checksum);
  CHECK(d.table4.size() == 34);
  setenv("CYQC_DATASET", "/nonexistent-dir", 1);
  CHECK_THROWS(load_dataset());
  unsetenv("CYQC_DATASET");
}
