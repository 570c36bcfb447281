// Command-line surface: regen, verify, mw, lattice, certify.
// Output is deterministic (byte-identical across runs for fixed inputs).
// Exit codes: 0 success, 1 verification mismatch, 2 usage or parse error.
#pragma once

#include <json.hpp>

#include <iostream>

#include "cyqc/classify.hpp"

namespace cyqc {

using nlohmann::json;

namespace cli_detail {

inline std::string flag(bool ok) { return ok ? "ok" : "MISMATCH"; }

struct CaseBundleCache {
  std::map<int, SigmaPairCase> cases;
  std::map<int, KernelData> kernels;
  const SigmaPairCase& sc(int id) {
    auto it = cases.find(id);
    if (it == cases.end()) it = cases.emplace(id, build_sigma_case(id)).first;
    return it->second;
  }
  const KernelData& kd(int id) {
    auto it = kernels.find(id);
    if (it == kernels.end()) it = kernels.emplace(id, analyze_case(sc(id))).first;
    return it->second;
  }
};

inline CaseBundleCache& cache() {
  static CaseBundleCache c;
  return c;
}

inline json gram_json(const MatQ& g) {
  json rows = json::array();
  for (int i = 0; i < g.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < g.cols; ++j) row.push_back(to_string(g(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline std::string types_string(const std::vector<Fiber>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fiber_to_string(v[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// regen

struct Cell {
  std::string value;
  bool checked = false;
  bool ok = true;
};

using Row = std::vector<Cell>;

inline void emit_rows(std::ostream& out, const std::vector<Row>& rows, bool json_format,
                      const std::vector<std::string>& columns) {
  if (json_format) {
    json arr = json::array();
    for (const auto& r : rows) {
      json obj;
      bool all = true;
      for (size_t i = 0; i < r.size(); ++i) {
        obj[columns[i]] = r[i].value;
        if (r[i].checked && !r[i].ok) all = false;
      }
      obj["match"] = all;
      arr.push_back(obj);
    }
    out << arr.dump(2) << "\n";
    return;
  }
  for (const auto& r : rows) {
    bool all = true;
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) out << "\t";
      out << r[i].value;
      if (r[i].checked && !r[i].ok) all = false;
    }
    out << "\t" << flag(all) << "\n";
  }
}

inline bool regen_table(int table, bool json_format, std::ostream& out) {
  const auto& d = dataset();
  std::vector<Row> rows;
  std::vector<std::string> columns;
  bool all_ok = true;
  auto cell = [](std::string v) { return Cell{std::move(v), false, true}; };
  auto checked = [&](std::string v, bool ok) {
    return Cell{std::move(v), true, ok};
  };
  auto note = [&](const Row& r) {
    for (const auto& c : r)
      if (c.checked && !c.ok) all_ok = false;
  };
  switch (table) {
    case 1: {
      columns = {"fiber", "condition", "image"};
      for (const auto& rule : d.table1) {
        // evaluate the executable map against the transcription instance-wise
        bool ok = true;
        for (long m = 2; m <= 12; ++m) {
          if (rule.period && (m % rule.period) != rule.residue) continue;
          for (int M = 0; M <= 4; ++M) {
            Fiber src;
            if (rule.src == "I0") {
              if (M) continue;
              src = fiber_I(0);
            } else if (rule.src == "IM") {
              if (!M) continue;
              src = fiber_I(M);
            } else if (rule.src == "IM*") {
              src = fiber_Istar(M);
            } else {
              if (M) continue;
              src = parse_fiber(rule.src);
            }
            std::string dst = rule.dst;
            if (auto p = dst.find("{mM}"); p != std::string::npos)
              dst = dst.substr(0, p) + std::to_string(m * src.n) + dst.substr(p + 4);
            if (!(pullback(src, m) == parse_fiber(dst))) ok = false;
          }
        }
        std::string cond = rule.period
                               ? std::to_string(rule.residue) + "%" + std::to_string(rule.period)
                               : "*";
        Row r{cell(rule.src), cell(cond), checked(rule.dst, ok)};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    case 2: {
      columns = {"position", "family", "formula"};
      for (const auto& rule : d.table2)
        rows.push_back({cell(rule.position), cell(rule.families), cell(rule.formula)});
      // the identity D = chi - chi(pullback) ties the formulas to the map
      bool identity_ok = true;
      std::vector<Fiber> kinds;
      for (int n : {0, 1, 2, 3, 4}) kinds.push_back(fiber_I(n));
      for (int n : {0, 1, 2}) kinds.push_back(fiber_Istar(n));
      for (auto k :
           {Fiber::II, Fiber::III, Fiber::IV, Fiber::IVstar, Fiber::IIIstar, Fiber::IIstar})
        kinds.push_back(Fiber{k, 0});
      for (const auto& f : kinds)
        for (long m = 2; m <= 6; ++m)
          if (deficiency(f, m, true) != euler(f) - euler(pullback(f, m))) identity_ok = false;
      rows.push_back({cell("identity"), cell("all"),
                      checked("D = chi - chi(pullback) on ramified fibers", identity_ok)});
      note(rows.back());
      break;
    }
    case 3: {
      columns = {"m", "types"};
      for (const auto& row : d.table3) {
        auto derived = suitable_f0_types(row.m);
        auto key = [](std::vector<Fiber> v) {
          std::vector<std::string> s;
          for (const auto& f : v) s.push_back(fiber_to_string(f));
          std::sort(s.begin(), s.end());
          return s;
        };
        Row r{cell(std::to_string(row.m)),
              checked(types_string(derived), key(derived) == key(row.types))};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    case 4: {
      columns = {"case", "m", "f0_quotient", "mw_quotient", "tors_quotient",
                 "f0_cover", "mw_cover", "tors_cover", "T"};
      for (const auto& row : d.table4) {
        auto c = check_table4_row(row);
        Row r{cell(std::to_string(row.id)),
              checked(std::to_string(row.m), c.suitable),
              cell(fiber_to_string(row.f0_quotient)),
              checked(spec_to_string(row.mw_quotient), c.mw_quotient_match),
              checked(factors_to_string(row.tors_quotient), c.tors_quotient_match),
              checked(fiber_to_string(row.f0_cover), c.f0_cover_match),
              checked(spec_to_string(row.mw_cover), c.mw_cover_match),
              checked(factors_to_string(row.tors_cover), c.tors_cover_match),
              checked(spec_to_string(row.t_cover), c.t_match)};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    case 5: {
      columns = {"case", "d", "kernel", "kernel_tors", "kernel_d1", "kernel_d1_tors"};
      for (const auto& row : d.table5) {
        const auto& kd = cache().kd(row.case_id);
        bool d_ok = kd.allowed_d == std::set<long>({1, row.d});
        bool ker_ok = is_isometric(GramLattice(kd.kernel.gram, kd.kernel_tors),
                                   GramLattice(gram_of(row.ker).gram, row.ker_tors));
        bool d1_ok = is_isometric(GramLattice(kd.kernel_d1.gram, kd.kernel_d1_tors),
                                  GramLattice(gram_of(row.ker_d1).gram, row.ker_d1_tors));
        Row r{cell(std::to_string(row.case_id)), checked(std::to_string(row.d), d_ok),
              checked(spec_to_string(row.ker), ker_ok), cell(factors_to_string(row.ker_tors)),
              checked(spec_to_string(row.ker_d1), d1_ok),
              cell(factors_to_string(row.ker_d1_tors))};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    case 6: {
      columns = {"row", "group", "dim", "config", "T", "mw", "tors"};
      for (const auto& row : d.table6) {
        auto c = check_first_kind_row(row);
        Row r{cell(std::to_string(row.id)),
              checked(factors_to_string(row.group), c.group_match),
              checked(std::to_string(row.dim), c.dim_match && c.rank_matches_dim),
              cell(config_to_string(row.config)),
              checked(spec_to_string(row.t), c.t_match),
              checked(spec_to_string(row.mw), c.mw_match),
              cell(factors_to_string(row.tors))};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    case 7: {
      columns = {"row", "configs"};
      for (const auto& row : d.table7) {
        bool ok = true;
        std::string joined;
        for (size_t i = 0; i < row.configs.size(); ++i) {
          if (i) joined += "|";
          joined += config_to_string(row.configs[i]);
          if (row.configs[i].total_euler() != 12) ok = false;
        }
        if (fiber_multiset(row.configs.front()) !=
            fiber_multiset(d.table6.at(row.id - 1).config))
          ok = false;
        Row r{cell(std::to_string(row.id)), checked(joined, ok)};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    case 8:
    case 9: {
      columns = {"row", "group", "m", "d", "dim", "config", "T", "mw", "tors",
                 "mw_alpha", "mw_alpha_tors", "ker", "ker_tors", "ker_d1", "ker_d1_tors",
                 "case", "strata"};
      const auto& rows_in = table == 8 ? d.table8 : d.table9;
      for (const auto& row : rows_in) {
        const auto& sc = cache().sc(row.case_id);
        const auto& kd = cache().kd(row.case_id);
        auto c = check_second_kind_row(row, sc, kd);
        std::string dstr;
        for (size_t i = 0; i < row.ds.size(); ++i) {
          if (i) dstr += "/";
          dstr += std::to_string(row.ds[i]);
        }
        bool strata_ok = true;
        std::string strata;
        if (row.strata.empty()) strata = "-";
        for (size_t s = 0; s < row.strata.size(); ++s) {
          if (s) strata += ";";
          for (size_t i = 0; i < row.strata[s].size(); ++i) {
            if (i) strata += "|";
            strata += config_to_string(row.strata[s][i]);
            if (row.strata[s][i].total_euler() != 12) strata_ok = false;
          }
        }
        Row r{cell(std::to_string(row.id)),
              checked(factors_to_string(row.group), c.group_match),
              cell(std::to_string(row.m)),
              checked(dstr, c.d_list_match),
              checked(std::to_string(row.dim), c.dim_match),
              checked(config_to_string(row.config), c.config_match),
              checked(spec_to_string(row.t), c.columns_match),
              cell(spec_to_string(row.mw)),
              cell(factors_to_string(row.tors)),
              cell(spec_to_string(row.mw_alpha)),
              cell(factors_to_string(row.mw_alpha_tors)),
              cell(spec_to_string(row.ker)),
              cell(factors_to_string(row.ker_tors)),
              cell(row.has_ker_d1 ? spec_to_string(row.ker_d1) : "-"),
              cell(row.has_ker_d1 ? factors_to_string(row.ker_d1_tors) : "-"),
              cell(std::to_string(row.case_id)),
              checked(strata, strata_ok)};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    case 10: {
      columns = {"group", "m", "h", "cases"};
      for (const auto& row : d.table10) {
        auto c = check_threefold_row(row);
        Row r{cell(factors_to_string(row.group)), cell(std::to_string(row.m)),
              checked(std::to_string(row.h), c.h_match && c.strata_dims_ok && c.pairing_ok),
              checked(c.derived_display, c.display_match)};
        note(r);
        rows.push_back(r);
      }
      break;
    }
    default:
      throw std::invalid_argument("no table " + std::to_string(table));
  }
  emit_rows(out, rows, json_format, columns);
  return all_ok;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyLog {
  std::ostream& out;
  long checks = 0, failures = 0;
  void line(bool ok, const std::string& what) {
    ++checks;
    if (!ok) ++failures;
    out << (ok ? "ok   " : "FAIL ") << what << "\n";
  }
};

inline int run_verify(std::optional<int> case_id, std::ostream& out) {
  const auto& d = dataset();
  VerifyLog log{out};
  std::vector<int> case_ids;
  if (case_id)
    case_ids = {*case_id};
  else
    for (const auto& row : d.table4) case_ids.push_back(row.id);

  if (!case_id) {
    // table-level suites
    {
      std::ostringstream sink;
      bool ok1 = regen_table(1, false, sink);
      log.line(ok1, "table 1: pullback map matches the transcription");
      std::ostringstream sink2;
      log.line(regen_table(2, false, sink2), "table 2: deficiency formulas and Euler identity");
      std::ostringstream sink3;
      log.line(regen_table(3, false, sink3), "table 3: allowed marked fibers rederived");
    }
    for (const auto& row : d.table4) {
      auto c = check_table4_row(row);
      log.line(c.all(), "table 4 case " + std::to_string(row.id));
    }
    for (const auto& rep : verify_complement_catalogue())
      log.line(rep.all_match, "complement catalogue case " + std::to_string(rep.case_id) +
                                  " (" + std::to_string(rep.embeddings) + " embeddings)");
    for (const auto& c : first_kind_table())
      log.line(c.all(), "table 6 row " + std::to_string(c.id));
  }

  for (int id : case_ids) {
    const auto& sc = cache().sc(id);
    const auto& kd = cache().kd(id);
    log.line(sc.fixed_lat.rank + kd.kernel.rank == sc.total.mw.mw.lat.rank,
             "kernel rank additivity case " + std::to_string(id));
    std::string ds;
    for (long dd : kd.allowed_d) ds += (ds.empty() ? "" : ",") + std::to_string(dd);
    log.line(true, "d-splitting case " + std::to_string(id) + ": {" + ds + "}");
    if (sc.m == 2) {
      long index = 0;
      image_one_minus_alpha_m2(sc, kd, &index);
      log.line(index >= 1, "image of (1 - alpha) case " + std::to_string(id) +
                               ": index " + std::to_string(index) + " in the kernel");
    }
  }
  for (const auto& t5 : d.table5) {
    if (case_id && t5.case_id != *case_id) continue;
    const auto& kd = cache().kd(t5.case_id);
    bool ok = kd.allowed_d == std::set<long>({1, t5.d}) &&
              is_isometric(GramLattice(kd.kernel_d1.gram, kd.kernel_d1_tors),
                           GramLattice(gram_of(t5.ker_d1).gram, t5.ker_d1_tors));
    log.line(ok, "table 5 case " + std::to_string(t5.case_id));
  }
  for (const auto& row : d.second_kind_rows()) {
    if (case_id && row.case_id != *case_id) continue;
    const auto& sc = cache().sc(row.case_id);
    const auto& kd = cache().kd(row.case_id);
    auto c = check_second_kind_row(row, sc, kd);
    log.line(c.all(), "row " + std::to_string(row.id) + " (case " +
                          std::to_string(row.case_id) + ")");
    for (long dd : row.ds) {
      auto cert = existence_certificate(row, sc, kd, dd);
      log.line(cert.verified, "certificate row " + std::to_string(row.id) + " d=" +
                                  std::to_string(dd) + " (" +
                                  std::to_string(cert.sections.size()) + " sections)");
    }
  }
  if (!case_id)
    for (const auto& c : assemble_threefolds())
      log.line(c.all(), "table 10 " + factors_to_string(c.group) + " m=" +
                            std::to_string(c.m) + " [" + c.derived_display + "]");
  out << "summary: " << log.checks << " checks, " << log.failures << " failures\n";
  return log.failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// mw / lattice / certify

inline int run_mw(const std::string& config_text, bool json_format, std::ostream& out) {
  Config c = parse_config(config_text);
  if (c.total_euler() + euler(c.at_infinity) != 12)
    throw std::invalid_argument("configuration Euler sum is not 12");
  LatticeSpec t = config_root_lattice(c);
  auto der = mw_from_T(t);
  Rat lhs = det(gram_of(t)) * det(der.mw.lat);
  long tor = group_order(der.mw.tors);
  bool ok = lhs == Rat(tor) * Rat(tor);
  if (json_format) {
    json obj;
    obj["config"] = config_to_string(c);
    obj["T"] = spec_to_string(t);
    obj["mw_rank"] = der.mw.lat.rank;
    obj["mw_gram"] = gram_json(der.mw.lat.gram);
    obj["mw_tors"] = factors_to_string(der.mw.tors);
    obj["det_T"] = to_string(det(gram_of(t)));
    obj["det_mw"] = to_string(det(der.mw.lat));
    obj["determinant_check"] = ok;
    out << obj.dump(2) << "\n";
  } else {
    out << "config:  " << config_to_string(c) << "\n";
    out << "T:       " << spec_to_string(t) << "\n";
    out << "MW_lat:  rank " << der.mw.lat.rank << ", gram " << mat_to_string(der.mw.lat.gram)
        << "\n";
    out << "MW_tors: " << factors_to_string(der.mw.tors) << "\n";
    out << "check:   det(T) * det(MW_lat) = " << to_string(lhs) << " = |MW_tors|^2 "
        << (ok ? "ok" : "MISMATCH") << "\n";
  }
  return ok ? 0 : 1;
}

inline int run_lattice(const std::string& spec_text, bool json_format, bool want_dual,
                       const std::optional<std::string>& bound, std::ostream& out) {
  LatticeSpec spec = parse_spec(spec_text);
  GramLattice l = gram_of(spec);
  if (want_dual) l = dual(l);
  if (json_format) {
    json obj;
    obj["spec"] = spec_to_string(spec);
    obj["rank"] = l.rank;
    obj["gram"] = gram_json(l.gram);
    obj["det"] = to_string(det(l));
    if (l.rank > 0) obj["minimal_norm"] = to_string(minimal_norm(l));
    if (bound) {
      auto vecs = vectors_up_to_norm(l, parse_rat(*bound));
      obj["vectors_up_to_" + *bound] = long(vecs.size());
    }
    out << obj.dump(2) << "\n";
  } else {
    out << "spec: " << spec_to_string(spec) << (want_dual ? " (dual)" : "") << "\n";
    out << "rank: " << l.rank << "\n";
    out << "gram: " << mat_to_string(l.gram) << "\n";
    out << "det:  " << to_string(det(l)) << "\n";
    if (l.rank > 0) out << "min:  " << to_string(minimal_norm(l)) << "\n";
    if (bound) {
      auto vecs = vectors_up_to_norm(l, parse_rat(*bound));
      out << "vectors with norm <= " << *bound << ": " << vecs.size() << "\n";
      for (const auto& v : vecs) {
        out << " ";
        for (long x : v) out << " " << x;
        out << "  (norm " << to_string(norm_of(l.gram, v)) << ")\n";
      }
    }
  }
  return 0;
}

inline int run_certify(std::optional<int> case_id, std::ostream& out) {
  const auto& d = dataset();
  bool all_ok = true;
  for (const auto& row : d.second_kind_rows()) {
    if (case_id && row.case_id != *case_id) continue;
    const auto& sc = cache().sc(row.case_id);
    const auto& kd = cache().kd(row.case_id);
    for (long dd : row.ds) {
      auto cert = existence_certificate(row, sc, kd, dd);
      static const char* names[] = {"minimal_vector", "pigeonhole_4", "pigeonhole_8_case10",
                                    "sum_of_orders"};
      out << "row " << row.id << " d=" << dd << " [" << names[cert.argument] << "] "
          << (cert.verified ? "ok" : "FAIL") << "\n";
      for (const auto& s : cert.sections) {
        out << "  section";
        if (!s.vec.empty()) {
          out << " vec(";
          for (size_t i = 0; i < s.vec.size(); ++i) out << (i ? "," : "") << s.vec[i];
          out << ")";
        }
        bool has_tors = false;
        for (long t : s.tors)
          if (t) has_tors = true;
        if (has_tors) {
          out << " tors(";
          for (size_t i = 0; i < s.tors.size(); ++i) out << (i ? "," : "") << s.tors[i];
          out << ")";
        }
        out << " norm " << to_string(s.norm);
        if (!s.pattern.empty()) {
          out << " meets";
          for (const auto& [fi, e] : s.pattern)
            if (!(e == CompElt{}))
              out << " " << fiber_to_string(sc.total.config.fibers[fi]) << "#" << fi << ":"
                  << comp_label(sc.total.config.fibers[fi], e);
        }
        out << "\n";
      }
      for (const auto& chk : cert.checks) out << "  check: " << chk << "\n";
      if (!cert.verified) all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace cli_detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  auto usage = [&]() {
    err << "usage: cyqc <regen|verify|mw|lattice|certify> [options]\n"
        << "  regen   --table N [--format tsv|json]\n"
        << "  verify  [--case N]\n"
        << "  mw      --config \"<fibers>\" [--format tsv|json]\n"
        << "  lattice --spec \"<lattice>\" [--dual] [--vectors BOUND] [--format tsv|json]\n"
        << "  certify [--case N]\n";
    return 2;
  };
  if (args.empty()) return usage();
  std::map<std::string, std::string> opts;
  std::set<std::string> flags;
  for (size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) {
      err << "unexpected argument: " << a << "\n";
      return 2;
    }
    std::string name = a.substr(2);
    if (name == "dual") {
      flags.insert(name);
      continue;
    }
    if (i + 1 >= args.size()) {
      err << "missing value for --" << name << "\n";
      return 2;
    }
    opts[name] = args[++i];
  }
  bool json_format = false;
  if (auto it = opts.find("format"); it != opts.end()) {
    if (it->second == "json")
      json_format = true;
    else if (it->second != "tsv") {
      err << "unknown format: " << it->second << "\n";
      return 2;
    }
  }
  std::optional<int> case_opt;
  if (auto it = opts.find("case"); it != opts.end()) {
    try {
      case_opt = std::stoi(it->second);
    } catch (...) {
      err << "bad case id: " << it->second << "\n";
      return 2;
    }
    if (*case_opt < 1 || *case_opt > 34) {
      err << "case id out of range 1..34\n";
      return 2;
    }
  }
  try {
    const std::string& cmd = args[0];
    if (cmd == "regen") {
      auto it = opts.find("table");
      if (it == opts.end()) return usage();
      int table = std::stoi(it->second);
      if (table < 1 || table > 10) {
        err << "no table " << table << "\n";
        return 2;
      }
      return regen_table(table, json_format, out) ? 0 : 1;
    }
    if (cmd == "verify") return run_verify(case_opt, out);
    if (cmd == "mw") {
      auto it = opts.find("config");
      if (it == opts.end()) return usage();
      return run_mw(it->second, json_format, out);
    }
    if (cmd == "lattice") {
      auto it = opts.find("spec");
      if (it == opts.end()) return usage();
      std::optional<std::string> bound;
      if (auto b = opts.find("vectors"); b != opts.end()) bound = b->second;
      return run_lattice(it->second, json_format, flags.count("dual") > 0, bound, out);
    }
    if (cmd == "certify") return run_certify(case_opt, out);
    return usage();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cyqc
