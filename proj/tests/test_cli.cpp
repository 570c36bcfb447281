#include <catch2/catch_amalgamated.hpp>

#include "cyqc/cli.hpp"

using namespace cyqc;

namespace {
struct Result {
  int code;
  std::string out, err;
};
Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}
long line_count(const std::string& s) {
  long n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}
}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({"regen"}).code == 2);
  CHECK(invoke({"regen", "--table", "11"}).code == 2);
  CHECK(invoke({"regen", "--table", "3", "--format", "xml"}).code == 2);
  CHECK(invoke({"verify", "--case", "99"}).code == 2);
  CHECK(invoke({"mw", "--config", "I7@0,nonsense"}).code == 2);
}

TEST_CASE("regen table 3 emits five matching lines") {
  auto r = invoke({"regen", "--table", "3", "--format", "tsv"});
  CHECK(r.code == 0);
  CHECK(line_count(r.out) == 5);
  CHECK(r.out.find("5\tII*\tok") != std::string::npos);
  CHECK(r.out.find("2\t") != std::string::npos);
  CHECK(r.out.find("MISMATCH") == std::string::npos);
}

TEST_CASE("regen tables emit match flags") {
  for (int t : {1, 2, 4, 5, 6, 7, 8, 9, 10}) {
    INFO("table " << t);
    auto r = invoke({"regen", "--table", std::to_string(t)});
    CHECK(r.code == 0);
    CHECK(r.out.find("MISMATCH") == std::string::npos);
  }
  auto j = invoke({"regen", "--table", "4", "--format", "json"});
  CHECK(j.code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.size() == 34);
  for (const auto& row : parsed) CHECK(row.at("match") == true);
}

TEST_CASE("mw derives the Mordell-Weil column from a configuration") {
  auto r = invoke({"mw", "--config", "I8@0,I1x4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("T:       A7") != std::string::npos);
  CHECK(r.out.find("MW_tors: Z2") != std::string::npos);
  CHECK(r.out.find("[1/2]") != std::string::npos);
  auto j = invoke({"mw", "--config", "I1x12", "--format", "json"});
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.at("mw_rank") == 8);
  CHECK(parsed.at("determinant_check") == true);
}

TEST_CASE("lattice subcommand") {
  auto r = invoke({"lattice", "--spec", "dual(D4)+U1/4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("rank: 5") != std::string::npos);
  CHECK(r.out.find("det:  1/16") != std::string::npos);
  auto v = invoke({"lattice", "--spec", "E8", "--vectors", "2", "--format", "json"});
  auto parsed = nlohmann::json::parse(v.out);
  CHECK(parsed.at("vectors_up_to_2") == 240);
}

TEST_CASE("verify for a single case") {
  auto r = invoke({"verify", "--case", "18"});
  CHECK(r.code == 0);
  CHECK(r.out.find("d-splitting case 18: {1}") != std::string::npos);
  CHECK(r.out.find("certificate row 27") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find(" 0 failures") != std::string::npos);
}

TEST_CASE("certify prints witness data") {
  auto r = invoke({"certify", "--case", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("pigeonhole_8_case10") != std::string::npos);
  CHECK(r.out.find("check:") != std::string::npos);
}

TEST_CASE("regen output is deterministic") {
  for (int t : {3, 4, 10}) {
    auto a = invoke({"regen", "--table", std::to_string(t), "--format", "json"});
    auto b = invoke({"regen", "--table", std::to_string(t), "--format", "json"});
    CHECK(a.out == b.out);
  }
}
