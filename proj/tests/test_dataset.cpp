#include <catch2/catch_amalgamated.hpp>

#include "cyqc/dataset.hpp"

using namespace cyqc;

namespace {

// Interprets a table-1 transcription row as a map m -> fiber.
std::optional<Fiber> apply_rule(const PullbackRule& r, const Fiber& src, long m) {
  auto matches = [&](const std::string& name) {
    if (name == "I0") return src == fiber_I(0);
    if (name == "IM") return src.kind == Fiber::In && src.n >= 1;
    if (name == "IM*") return src.kind == Fiber::Instar;
    return fiber_to_string(src) == name;
  };
  if (!matches(r.src)) return std::nullopt;
  if (r.period && (m % r.period) != r.residue) return std::nullopt;
  std::string dst = r.dst;
  if (auto p = dst.find("{mM}"); p != std::string::npos)
    dst = dst.substr(0, p) + std::to_string(m * src.n) + dst.substr(p + 4);
  return parse_fiber(dst);
}

// Interprets the table-2 formula strings (the four shapes that occur).
long eval_deficiency_formula(const std::string& formula, long m, long chi) {
  if (formula == "(1-m)*chi") return (1 - m) * chi;
  if (formula == "(1-m)*chi+6*(m-delta);delta=m%2") return (1 - m) * chi + 6 * (m - m % 2);
  if (formula == "(1-delta)*chi;delta=m%(12/chi)") return (1 - m % (12 / chi)) * chi;
  if (formula == "eps*(12-chi);eps=(m-1)%(12/(12-chi))")
    return ((m - 1) % (12 / (12 - chi))) * (12 - chi);
  throw std::invalid_argument("unknown formula " + formula);
}

bool family_matches(const std::string& families, const Fiber& f) {
  if (families == "any") return true;
  for (const auto& name : detail::split_top(families, ',')) {
    if (name == "IM" && f.kind == Fiber::In) return true;
    if (name == "IM*" && f.kind == Fiber::Instar) return true;
    if (fiber_to_string(f) == name) return true;
  }
  return false;
}

std::vector<Fiber> sample_fibers() {
  std::vector<Fiber> v;
  for (int n : {0, 1, 2, 3, 4}) v.push_back(fiber_I(n));
  for (int n : {0, 1, 2, 3, 4}) v.push_back(fiber_Istar(n));
  for (auto k : {Fiber::II, Fiber::III, Fiber::IV, Fiber::IVstar, Fiber::IIIstar, Fiber::IIstar})
    v.push_back(Fiber{k, 0});
  return v;
}

}  // namespace

TEST_CASE("dataset loads with all ten tables") {
  const auto& d = dataset();
  CHECK(d.raw.size() == 10);
  CHECK(d.table4.size() == 34);
  CHECK(d.table5.size() == 6);
  CHECK(d.table6.size() == 8);
  CHECK(d.table8.size() == 25);
  CHECK(d.table9.size() == 12);
  // eight group blocks
  std::set<std::string> groups;
  for (const auto& r : d.table10) groups.insert(factors_to_string(r.group));
  CHECK(groups.size() == 8);
  CHECK(!d.checksum.empty());
}

TEST_CASE("pullback matches the table-1 transcription") {
  const auto& d = dataset();
  for (const auto& src : sample_fibers())
    for (long m = 2; m <= 6; ++m) {
      std::optional<Fiber> expected;
      for (const auto& rule : d.table1)
        if (auto r = apply_rule(rule, src, m)) {
          CHECK(!expected);  // rules must not overlap
          expected = r;
        }
      REQUIRE(expected.has_value());
      CHECK(pullback(src, m) == *expected);
    }
}

TEST_CASE("deficiency matches the table-2 transcription") {
  const auto& d = dataset();
  for (const auto& f : sample_fibers()) {
    if (f.smooth()) continue;
    for (long m = 2; m <= 6; ++m)
      for (bool ram : {false, true}) {
        std::optional<long> expected;
        for (const auto& rule : d.table2) {
          if ((rule.position == "ramified") != ram) continue;
          if (!family_matches(rule.families, f)) continue;
          expected = eval_deficiency_formula(rule.formula, m, euler(f));
        }
        REQUIRE(expected.has_value());
        CHECK(deficiency(f, m, ram) == *expected);
      }
  }
}

TEST_CASE("suitable f_0 table equals the table-3 transcription") {
  const auto& d = dataset();
  REQUIRE(d.table3.size() == 5);
  for (const auto& row : d.table3) {
    auto derived = suitable_f0_types(row.m);
    auto key = [](std::vector<Fiber> v) {
      std::vector<std::string> s;
      for (const auto& f : v) s.push_back(fiber_to_string(f));
      std::sort(s.begin(), s.end());
      return s;
    };
    CHECK(key(derived) == key(row.types));
  }
}

TEST_CASE("second-kind rows: numbering, cases and groups") {
  const auto& d = dataset();
  auto rows = d.second_kind_rows();
  REQUIRE(rows.size() == 37);
  for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].id == int(i) + 9);
  // every sigma-pair case is realized by at least one row
  std::set<int> seen;
  for (const auto& r : rows) {
    seen.insert(r.case_id);
    CHECK(r.m >= 2);
    CHECK(!r.ds.empty());
  }
  CHECK(seen.size() == 34);
}

TEST_CASE("configuration Euler sums are 12 across the dataset") {
  const auto& d = dataset();
  long specialization_configs = 0;
  for (const auto& r : d.table6) CHECK(r.config.total_euler() == 12);
  for (const auto& r : d.table7) {
    for (const auto& c : r.configs) {
      CHECK(c.total_euler() == 12);
      ++specialization_configs;
    }
  }
  for (const auto& r : d.second_kind_rows()) {
    CHECK(r.config.total_euler() == 12);
    for (const auto& stratum : r.strata)
      for (const auto& c : stratum) {
        CHECK(c.total_euler() == 12);
        ++specialization_configs;
      }
  }
  CHECK(specialization_configs >= 70);
}

TEST_CASE("specialization lists contain their generic configuration") {
  const auto& d = dataset();
  for (const auto& r : d.table7) {
    const auto& generic = d.table6.at(r.id - 1).config;
    REQUIRE(!r.configs.empty());
    CHECK(fiber_multiset(r.configs.front()) == fiber_multiset(generic));
  }
  for (const auto& r : d.second_kind_rows())
    if (!r.strata.empty()) {
      REQUIRE(!r.strata.front().empty());
      CHECK(fiber_multiset(r.strata.front().front()) == fiber_multiset(r.config));
    }
}

TEST_CASE("round trip: serialized rows reparse identically") {
  const auto& d = dataset();
  for (const auto& r : d.table6) {
    CHECK(fiber_multiset(parse_config(config_to_string(r.config))) == fiber_multiset(r.config));
    CHECK(spec_multiset_key(parse_spec(spec_to_string(r.t))) == spec_multiset_key(r.t));
    CHECK(parse_factors(factors_to_string(r.tors)) == r.tors);
  }
  for (const auto& r : d.second_kind_rows()) {
    auto rt = parse_config(config_to_string(r.config));
    CHECK(fiber_multiset(rt) == fiber_multiset(r.config));
    CHECK((rt.at_zero >= 0) == (r.config.at_zero >= 0));
    CHECK(spec_multiset_key(parse_spec(spec_to_string(r.mw))) == spec_multiset_key(r.mw));
  }
}

TEST_CASE("deterministic checksum") {
  auto a = load_dataset();
  auto b = load_dataset();
  CHECK(a.checksum == b.checksum);
}
