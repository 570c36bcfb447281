#include <catch2/catch_amalgamated.hpp>

#include "cyqc/kodaira.hpp"

using namespace cyqc;

TEST_CASE("euler numbers") {
  CHECK(euler(fiber_I(0)) == 0);
  CHECK(euler(fiber_I(3)) == 3);
  CHECK(euler(fiber_Istar(2)) == 8);
  CHECK(euler(Fiber{Fiber::IVstar, 0}) == 8);
  CHECK(euler(Fiber{Fiber::IIstar, 0}) == 10);
  // forced by total Euler number 12 on known configurations
  CHECK(euler(Fiber{Fiber::IVstar, 0}) + 4 * euler(fiber_I(1)) == 12);
  CHECK(euler(fiber_Istar(2)) + 2 * euler(fiber_I(2)) == 12);
}

TEST_CASE("root lattices of fibers") {
  CHECK(spec_to_string(root_lattice(fiber_I(8))) == "A7");
  CHECK(spec_to_string(root_lattice(Fiber{Fiber::IVstar, 0})) == "E6");
  CHECK(root_lattice(Fiber{Fiber::II, 0}).zero());
  CHECK(root_lattice(fiber_I(1)).zero());
  CHECK(spec_to_string(root_lattice(fiber_Istar(0))) == "D4");
  CHECK(spec_to_string(root_lattice(Fiber{Fiber::III, 0})) == "A1");
}

TEST_CASE("contribution terms") {
  CHECK(contr(fiber_I(2), 1, 1) == rat(1, 2));
  CHECK(contr(fiber_I(8), 3, 3) == rat(15, 8));
  CHECK(contr(fiber_I(8), 0, 3) == 0);
  CHECK(contr(Fiber{Fiber::IV, 0}, 1, 2) == rat(1, 3));
  CHECK(contr(fiber_I(4), 2, 2) == 1);
  CHECK(contr(fiber_I(4), 1, 1) == rat(3, 4));
  // symmetry and positivity on the diagonal
  for (const Fiber& f : {fiber_I(6), fiber_Istar(2), Fiber{Fiber::IVstar, 0}}) {
    int r = root_rank(f);
    for (int i = 1; i <= r; ++i) {
      CHECK(contr(f, i, i) > 0);
      for (int j = 1; j <= r; ++j) CHECK(contr(f, i, j) == contr(f, j, i));
    }
  }
}

TEST_CASE("component groups and labels") {
  // I_0*: three non-neutral ends, each contribution 1
  Fiber i0s = fiber_Istar(0);
  auto g = component_group(i0s);
  CHECK(g.size() == 4);
  for (const auto& e : comp_elements(g))
    if (!(e == CompElt{})) CHECK(contr(i0s, e, e) == 1);
  // distinct ends pair with 1/2
  CHECK(contr(i0s, CompElt{1, 0}, CompElt{0, 1}) == rat(1, 2));

  // I_1*: cyclic of order 4; far ends 5/4, near end 1
  Fiber i1s = fiber_Istar(1);
  auto g4 = component_group(i1s);
  CHECK(g4.o1 == 4);
  CHECK(contr(i1s, CompElt{1, 0}, CompElt{1, 0}) == rat(5, 4));
  CHECK(contr(i1s, CompElt{2, 0}, CompElt{2, 0}) == 1);
  CHECK(contr(i1s, CompElt{3, 0}, CompElt{3, 0}) == rat(5, 4));
  CHECK(contr(i1s, CompElt{1, 0}, CompElt{3, 0}) == rat(3, 4));

  // IV*: two reachable components of contribution 4/3 pairing to 2/3
  Fiber iv_s = Fiber{Fiber::IVstar, 0};
  CHECK(contr(iv_s, CompElt{1, 0}, CompElt{1, 0}) == rat(4, 3));
  CHECK(contr(iv_s, CompElt{1, 0}, CompElt{2, 0}) == rat(2, 3));
  // III*: reachable component of contribution 3/2
  CHECK(contr(Fiber{Fiber::IIIstar, 0}, CompElt{1, 0}, CompElt{1, 0}) == rat(3, 2));
  // I_n: cyclic labels are root-basis labels
  CHECK(contr(fiber_I(8), CompElt{3, 0}, CompElt{3, 0}) == rat(15, 8));
}

TEST_CASE("pullback map") {
  CHECK(pullback(fiber_I(4), 2) == fiber_I(8));
  CHECK(pullback(Fiber{Fiber::II, 0}, 5) == Fiber{Fiber::IIstar, 0});
  CHECK(pullback(fiber_I(0), 3) == fiber_I(0));
  CHECK(pullback(fiber_Istar(4), 2) == fiber_I(8));
  CHECK(pullback(fiber_Istar(1), 3) == fiber_Istar(3));
  CHECK(pullback(Fiber{Fiber::IIIstar, 0}, 2) == fiber_Istar(0));
  CHECK(pullback(Fiber{Fiber::IVstar, 0}, 3) == fiber_I(0));
  CHECK(pullback(Fiber{Fiber::IIstar, 0}, 6) == fiber_I(0));
}

TEST_CASE("deficiency values and the pullback identity") {
  CHECK(deficiency(fiber_I(3), 3, false) == -6);
  CHECK(deficiency(Fiber{Fiber::IIstar, 0}, 2, true) == 2);
  CHECK(deficiency(fiber_I(0), 4, true) == 0);
  CHECK(deficiency(fiber_I(0), 4, false) == 0);
  // ramified deficiency equals the Euler drop to the single preimage,
  // for every kind and every m in 2..6
  std::vector<Fiber> kinds;
  for (int n : {0, 1, 2, 3, 4}) kinds.push_back(fiber_I(n));
  for (int n : {0, 1, 2}) kinds.push_back(fiber_Istar(n));
  for (auto k : {Fiber::II, Fiber::III, Fiber::IV, Fiber::IVstar, Fiber::IIIstar, Fiber::IIstar})
    kinds.push_back(Fiber{k, 0});
  for (const auto& f : kinds)
    for (long m = 2; m <= 6; ++m)
      CHECK(deficiency(f, m, true) == euler(f) - euler(pullback(f, m)));
}

TEST_CASE("suitable quotient check") {
  auto c = parse_config("II*@0,I1x2");
  CHECK(check_suitable_quotient(c, 6).suitable);
  CHECK_FALSE(check_suitable_quotient(parse_config("IV*@0,I2,I1x2"), 5).suitable);
  CHECK_FALSE(check_suitable_quotient(parse_config("I1x12"), 2).suitable);  // smooth f_0
  auto bad = parse_config("II*@0,I1,I1,I1");
  CHECK_THROWS(check_suitable_quotient(bad, 6));  // Euler sum off
}

TEST_CASE("allowed f_0 table is derived, not transcribed") {
  auto names = [](const std::vector<Fiber>& v) {
    std::vector<std::string> out;
    for (const auto& f : v) out.push_back(fiber_to_string(f));
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(names(suitable_f0_types(6)) == std::vector<std::string>{"II*"});
  CHECK(names(suitable_f0_types(5)) == std::vector<std::string>{"II*"});
  CHECK(names(suitable_f0_types(4)) == std::vector<std::string>{"II*", "III*"});
  CHECK(names(suitable_f0_types(3)) == std::vector<std::string>{"II*", "III*", "IV*"});
  CHECK(names(suitable_f0_types(2)) ==
        std::vector<std::string>{"I0*", "I1*", "I2*", "I3*", "I4*", "II*", "III*", "IV*"});
  for (long m = 7; m <= 12; ++m) CHECK(suitable_f0_types(m).empty());
}

TEST_CASE("vanishing-order typing") {
  CHECK(kodaira_from_orders({0, 0, 3}) == fiber_I(3));
  CHECK(kodaira_from_orders({0, 0, 0}) == fiber_I(0));
  CHECK(kodaira_from_orders({2, 3, 6}) == fiber_Istar(0));
  CHECK(kodaira_from_orders({2, 3, 9}) == fiber_Istar(3));
  CHECK(kodaira_from_orders({1, 1, 2}) == Fiber{Fiber::II, 0});
  CHECK(kodaira_from_orders({1, 2, 3}) == Fiber{Fiber::III, 0});
  CHECK(kodaira_from_orders({2, 2, 4}) == Fiber{Fiber::IV, 0});
  CHECK(kodaira_from_orders({3, 4, 8}) == Fiber{Fiber::IVstar, 0});
  CHECK(kodaira_from_orders({3, 5, 9}) == Fiber{Fiber::IIIstar, 0});
  CHECK(kodaira_from_orders({4, 5, 10}) == Fiber{Fiber::IIstar, 0});
  CHECK_THROWS_AS(kodaira_from_orders({4, 6, 12}), std::domain_error);
}

TEST_CASE("vanishing-order typing against explicit pencils") {
  // nodal pencil: A4 = -3, A6 = 2 + t^3; disc = 27 t^3 (4 + t^3)
  Poly a4 = poly({rat(-3)});
  Poly a6 = poly({rat(2), rat(0), rat(0), rat(1)});
  CHECK(kodaira_at(a4, a6, rat(0)) == fiber_I(3));
  // the other finite singular fibers sit at roots of 4 + t^3 (irrational);
  // infinity carries the rest of the Euler number
  Fiber at_inf = kodaira_at_infinity(a4, a6);
  CHECK(at_inf == fiber_Istar(0));
  CHECK(euler(fiber_I(3)) + 3 * euler(fiber_I(1)) + euler(at_inf) == 12);

  // quadratic-twist pencil: A4 = t^2, A6 = t^3; two I_0* fibers
  Poly b4 = poly({rat(0), rat(0), rat(1)});
  Poly b6 = poly({rat(0), rat(0), rat(0), rat(1)});
  CHECK(kodaira_at(b4, b6, rat(0)) == fiber_Istar(0));
  CHECK(kodaira_at_infinity(b4, b6) == fiber_Istar(0));
  CHECK(2 * euler(fiber_Istar(0)) == 12);

  // a smooth-at-zero sanity point
  Poly c4 = poly({rat(1)});
  Poly c6 = poly({rat(1)});
  CHECK(kodaira_at(c4, c6, rat(0)) == fiber_I(0));
}

TEST_CASE("config grammar") {
  auto c = parse_config("IV*@0,I1x4");
  CHECK(c.fibers.size() == 5);
  CHECK(c.at_zero >= 0);
  CHECK(c.fibers[c.at_zero] == Fiber{Fiber::IVstar, 0});
  CHECK(c.total_euler() == 12);
  CHECK(config_to_string(c) == "IV*@0,I1x4");
  auto c2 = parse_config("I2x4,I1x4");
  CHECK(c2.at_zero == -1);
  CHECK(config_to_string(parse_config(config_to_string(c2))) == "I2x4,I1x4");
  auto c3 = parse_config("I8@0,I1x4");
  CHECK(config_to_string(c3) == "I8@0,I1x4");
  CHECK(fiber_multiset(parse_config("I2*,I2x2")) == fiber_multiset(parse_config("I2,I2*,I2")));
}

TEST_CASE("invalid component indices are rejected") {
  CHECK_THROWS_AS(contr(fiber_I(2), 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(contr(Fiber{Fiber::II, 0}, 1, 1), std::invalid_argument);
}
