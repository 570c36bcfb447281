// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.  Exit code 0 iff all criteria pass.
#include <chrono>
#include <iostream>

#include "cyqc/cli.hpp"

using namespace cyqc;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, double seconds) {
  if (!pass) ++failures;
  char buf[32];
  snprintf(buf, sizeof buf, "%6.2fs", seconds);
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " [" << buf
            << "]: " << what << std::endl;
}

template <typename F>
void criterion(int number, const std::string& what, double budget_seconds, F&& body) {
  auto t0 = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body();
  } catch (const std::exception& e) {
    detail = std::string(" (exception: ") + e.what() + ")";
    pass = false;
  }
  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_seconds > 0 && dt >= budget_seconds) {
    pass = false;
    detail += " (over the " + std::to_string(long(budget_seconds)) + "s budget)";
  }
  report(number, pass, what + detail, dt);
}

struct Bundle {
  std::map<int, SigmaPairCase> cases;
  std::map<int, KernelData> kernels;
};
Bundle& bundle() {
  static Bundle b = [] {
    Bundle x;
    for (const auto& row : dataset().table4) {
      x.cases.emplace(row.id, build_sigma_case(row.id));
      x.kernels.emplace(row.id, analyze_case(x.cases.at(row.id)));
    }
    return x;
  }();
  return b;
}

}  // namespace

int main() {
  const auto& data = dataset();

  criterion(1, "minimal norms of the dual root lattices", 5.0, [&] {
    bool ok = true;
    for (int n = 1; n <= 8; ++n)
      ok = ok && minimal_norm(dual(gram_of("A" + std::to_string(n)))) == rat(n, n + 1);
    for (int n = 4; n <= 6; ++n) {
      auto dn = dual(gram_of("D" + std::to_string(n)));
      ok = ok && minimal_norm(dn) == 1;
      if (n > 4) {
        // a vector of norm n/4 must be present on top of the unit vectors
        bool found = false;
        for (const auto& v : vectors_up_to_norm(dn, rat(n, 4)))
          if (norm_of(dn.gram, v) == rat(n, 4)) found = true;
        ok = ok && found;
      }
    }
    ok = ok && minimal_norm(dual(gram_of("E6"))) == rat(4, 3);
    ok = ok && minimal_norm(dual(gram_of("E7"))) == rat(3, 2);
    ok = ok && minimal_norm(gram_of("E8")) == 2;
    return ok;
  });

  criterion(2, "complement catalogue over every found embedding", 60.0, [&] {
    auto reports = verify_complement_catalogue();
    if (reports.size() != 20) return false;
    bool ok = true;
    long n23 = 0, n15 = 0;
    for (const auto& r : reports) {
      ok = ok && r.all_match && r.embeddings >= 1;
      if (r.case_id == 23) n23 = r.embeddings;
      if (r.case_id == 15) n15 = r.embeddings;
    }
    return ok && n23 >= 4 && n15 >= 3;
  });

  criterion(3, "pullback map, deficiency identity, allowed marked fibers", 0, [&] {
    std::ostringstream sink;
    bool ok = cli_detail::regen_table(1, false, sink);
    std::ostringstream sink2;
    ok = ok && cli_detail::regen_table(2, false, sink2);
    auto key = [](std::vector<Fiber> v) {
      std::vector<std::string> s;
      for (const auto& f : v) s.push_back(fiber_to_string(f));
      std::sort(s.begin(), s.end());
      return s;
    };
    for (const auto& row : data.table3) ok = ok && key(suitable_f0_types(row.m)) == key(row.types);
    for (long m = 7; m <= 12; ++m) ok = ok && suitable_f0_types(m).empty();
    return ok;
  });

  criterion(4, "Mordell-Weil columns rebuilt for every tabulated surface", 0, [&] {
    bool ok = true;
    for (const auto& row : data.table4) ok = ok && check_table4_row(row).all();
    for (const auto& row : data.table6) {
      auto der = mw_from_T(config_root_lattice(row.config));
      Factors tors = row.tors;
      std::sort(tors.begin(), tors.end());
      ok = ok && is_isometric(der.mw.lat, gram_of(row.mw)) && der.mw.tors == tors;
    }
    for (const auto& row : data.second_kind_rows()) {
      const auto& sc = bundle().cases.at(row.case_id);
      Factors tors = row.tors;
      std::sort(tors.begin(), tors.end());
      ok = ok && is_isometric(sc.total.mw.mw.lat, gram_of(row.mw)) &&
           sc.total.mw.mw.tors == tors;
    }
    return ok;
  });

  criterion(5, "kernel columns and rank additivity", 0, [&] {
    bool ok = true;
    for (const auto& [id, sc] : bundle().cases) {
      const auto& kd = bundle().kernels.at(id);
      ok = ok && sc.fixed_lat.rank + kd.kernel.rank == sc.total.mw.mw.lat.rank;
    }
    for (const auto& row : data.second_kind_rows()) {
      const auto& kd = bundle().kernels.at(row.case_id);
      ok = ok && is_isometric(GramLattice(kd.kernel.gram, kd.kernel_tors),
                              GramLattice(gram_of(row.ker).gram, row.ker_tors));
    }
    return ok;
  });

  criterion(6, "d-splitting catalogue, including the negative findings", 0, [&] {
    bool ok = true;
    for (const auto& t5 : data.table5) {
      const auto& kd = bundle().kernels.at(t5.case_id);
      ok = ok && kd.allowed_d == std::set<long>({1, t5.d});
      ok = ok && is_isometric(GramLattice(kd.kernel_d1.gram, kd.kernel_d1_tors),
                              GramLattice(gram_of(t5.ker_d1).gram, t5.ker_d1_tors));
    }
    ok = ok && bundle().kernels.at(18).allowed_d == std::set<long>({1});
    ok = ok && bundle().kernels.at(21).allowed_d == std::set<long>({1});
    return ok;
  });

  criterion(7, "existence certificates for every line", 120.0, [&] {
    bool ok = true;
    for (const auto& row : data.second_kind_rows()) {
      const auto& sc = bundle().cases.at(row.case_id);
      const auto& kd = bundle().kernels.at(row.case_id);
      for (long dd : row.ds) {
        auto cert = existence_certificate(row, sc, kd, dd);
        ok = ok && cert.verified;
        if (row.id == 10) ok = ok && cert.sections.size() >= 7;
      }
    }
    return ok;
  });

  criterion(8, "threefold table rebuilt cell-for-cell", 0, [&] {
    auto checks = assemble_threefolds();
    if (checks.size() != 22) return false;
    bool ok = true;
    std::map<std::string, std::set<int>> h_by_group;
    bool cross_pair_seen = false;
    for (const auto& c : checks) {
      ok = ok && c.all();
      h_by_group[factors_to_string(c.group)].insert(c.h);
      if (c.derived_display.find('x') != std::string::npos) cross_pair_seen = true;
    }
    if (h_by_group.size() != 8) return false;
    std::multiset<int> hv;
    for (const auto& [g, hs] : h_by_group) {
      if (hs.size() != 1) return false;
      hv.insert(*hs.begin());
    }
    return ok && cross_pair_seen && hv == std::multiset<int>({3, 3, 3, 3, 5, 7, 7, 11});
  });

  criterion(9, "dimension formula spot checks and Euler sums", 0, [&] {
    bool ok = true;
    for (const auto& chk : stated_count_checks())
      ok = ok && lefschetz_dim(chk.n, chk.counts) - 2 == chk.expected_dim;
    for (const auto& c : first_kind_table()) ok = ok && c.all();
    for (int id : {9, 10, 13, 17, 21, 30, 34}) {
      const auto& row = data.second_kind(id);
      ok = ok && lefschetz_dim_smooth_f0(row, bundle().cases.at(row.case_id)) == row.dim;
    }
    long spec_configs = 0;
    for (const auto& r : data.table7)
      for (const auto& c : r.configs) {
        ok = ok && c.total_euler() == 12;
        ++spec_configs;
      }
    for (const auto& r : data.second_kind_rows())
      for (const auto& stratum : r.strata)
        for (const auto& c : stratum) {
          ok = ok && c.total_euler() == 12;
          ++spec_configs;
        }
    return ok && spec_configs >= 70;
  });

  criterion(10, "two consecutive full verify runs are byte-identical", 0, [&] {
    std::ostringstream first, second;
    int c1 = cli_detail::run_verify(std::nullopt, first);
    int c2 = cli_detail::run_verify(std::nullopt, second);
    return c1 == 0 && c2 == 0 && first.str() == second.str() && !first.str().empty();
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
