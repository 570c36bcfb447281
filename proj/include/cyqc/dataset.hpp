// Embedded, versioned transcription of the reference tables; the test oracle
// for everything the engines rebuild.  See data/SCHEMA.md for the format.
#pragma once

#include <cstdlib>
#include <fstream>

#include "cyqc/dataset_embedded.hpp"
#include "cyqc/kodaira.hpp"

namespace cyqc {

struct PullbackRule {
  std::string src;   // I0, IM, IM*, II, III, IV, IV*, III*, II*
  long residue = 0;  // valid when period > 0
  long period = 0;   // 0 means "*"
  std::string dst;   // may contain {mM}
};

struct DeficiencyRule {
  std::string position;  // ramified | unramified
  std::string families;  // comma list or "any"
  std::string formula;
};

struct Table3Row {
  long m;
  std::vector<Fiber> types;
};

struct Table4Row {
  int id;
  long m;
  Fiber f0_quotient;
  LatticeSpec mw_quotient;
  Factors tors_quotient;
  Fiber f0_cover;
  LatticeSpec mw_cover;
  Factors tors_cover;
  LatticeSpec t_cover;
};

struct Table5Row {
  int case_id;
  long d;
  LatticeSpec ker;
  Factors ker_tors;
  LatticeSpec ker_d1;
  Factors ker_d1_tors;
};

struct Table6Row {
  int id;
  Factors group;
  int dim;
  Config config;
  LatticeSpec t;
  LatticeSpec mw;
  Factors tors;
};

struct Table7Row {
  int id;
  std::vector<Config> configs;
};

struct SecondKindRow {
  int id;
  Factors group;
  long m;
  std::vector<long> ds;  // listed realizations, larger first
  int dim;
  Config config;
  LatticeSpec t;
  LatticeSpec mw;
  Factors tors;
  LatticeSpec mw_alpha;
  Factors mw_alpha_tors;
  LatticeSpec ker;
  Factors ker_tors;
  bool has_ker_d1 = false;
  LatticeSpec ker_d1;
  Factors ker_d1_tors;
  int case_id;
  std::vector<std::vector<Config>> strata;  // strata[0] holds the generic config
};

struct Table10Row {
  Factors group;
  long m;
  int h;
  std::string cases;  // verbatim display string
  struct Item {
    int left, right;  // left == right for diagonal families
  };
  std::vector<std::vector<Item>> strata;
};

struct Dataset {
  std::map<std::string, std::string> raw;  // table name -> file contents
  std::string version = "1";
  std::string checksum;

  std::vector<PullbackRule> table1;
  std::vector<DeficiencyRule> table2;
  std::vector<Table3Row> table3;
  std::vector<Table4Row> table4;
  std::vector<Table5Row> table5;
  std::vector<Table6Row> table6;
  std::vector<Table7Row> table7;
  std::vector<SecondKindRow> table8;  // rows 9..33
  std::vector<SecondKindRow> table9;  // rows 34..45
  std::vector<Table10Row> table10;

  std::vector<SecondKindRow> second_kind_rows() const {
    auto all = table8;
    all.insert(all.end(), table9.begin(), table9.end());
    return all;
  }
  const SecondKindRow& second_kind(int id) const {
    for (const auto& r : table8)
      if (r.id == id) return r;
    for (const auto& r : table9)
      if (r.id == id) return r;
    throw std::out_of_range("no second-kind row " + std::to_string(id));
  }
  const Table4Row& sigma_case(int id) const {
    for (const auto& r : table4)
      if (r.id == id) return r;
    throw std::out_of_range("no sigma-pair case " + std::to_string(id));
  }
};

namespace detail {

inline std::vector<std::vector<std::string>> parse_tsv(const std::string& text,
                                                       const std::string& where) {
  std::vector<std::vector<std::string>> rows;
  size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (line.empty() || line[0] == '#') {
      if (pos > text.size()) break;
      continue;
    }
    std::vector<std::string> cells;
    size_t c = 0;
    while (true) {
      size_t t = line.find('\t', c);
      if (t == std::string::npos) {
        cells.push_back(line.substr(c));
        break;
      }
      cells.push_back(line.substr(c, t - c));
      c = t + 1;
    }
    if (!cells.empty()) rows.push_back(cells);
    if (pos > text.size()) break;
  }
  (void)where;
  return rows;
}

inline std::vector<Config> parse_config_list(const std::string& s) {
  std::vector<Config> out;
  if (s == "-" || s.empty()) return out;
  for (const auto& part : split_top(s, '|')) out.push_back(parse_config(strip(part)));
  return out;
}

inline std::vector<std::vector<Config>> parse_strata(const std::string& s) {
  std::vector<std::vector<Config>> out;
  if (s == "-" || s.empty()) return out;
  for (const auto& part : split_top(s, ';')) out.push_back(parse_config_list(strip(part)));
  return out;
}

inline SecondKindRow parse_second_kind_row(const std::vector<std::string>& c,
                                           const std::string& where) {
  if (c.size() != 17)
    throw std::invalid_argument(where + ": expected 17 columns, got " +
                                std::to_string(c.size()));
  SecondKindRow r;
  int i = 0;
  r.id = std::stoi(c[i++]);
  r.group = parse_factors(c[i++]);
  r.m = std::stol(c[i++]);
  for (const auto& d : split_top(c[i], '/')) r.ds.push_back(std::stol(d));
  ++i;
  r.dim = std::stoi(c[i++]);
  r.config = parse_config(c[i++]);
  r.t = parse_spec(c[i++]);
  r.mw = parse_spec(c[i++]);
  r.tors = parse_factors(c[i++]);
  r.mw_alpha = parse_spec(c[i++]);
  r.mw_alpha_tors = parse_factors(c[i++]);
  r.ker = parse_spec(c[i++]);
  r.ker_tors = parse_factors(c[i++]);
  if (c[i] != "-") {
    r.has_ker_d1 = true;
    r.ker_d1 = parse_spec(c[i]);
    r.ker_d1_tors = parse_factors(c[i + 1] == "-" ? "0" : c[i + 1]);
  }
  i += 2;
  r.case_id = std::stoi(c[i++]);
  r.strata = parse_strata(c[i++]);
  return r;
}

inline std::vector<std::vector<Table10Row::Item>> parse_case_string(const std::string& s) {
  std::vector<std::vector<Table10Row::Item>> strata;
  for (const auto& stratum : split_top(s, ';')) {
    std::vector<Table10Row::Item> items;
    for (const auto& tok0 : split_top(strip(stratum), ',')) {
      std::string tok = strip(tok0);
      if (auto p = tok.find('x'); p != std::string::npos) {
        items.push_back({std::stoi(tok.substr(0, p)), std::stoi(tok.substr(p + 1))});
      } else if (auto q = tok.find('-'); q != std::string::npos) {
        int a = std::stoi(tok.substr(0, q)), b = std::stoi(tok.substr(q + 1));
        for (int v = a; v <= b; ++v) items.push_back({v, v});
      } else {
        int v = std::stoi(tok);
        items.push_back({v, v});
      }
    }
    strata.push_back(items);
  }
  return strata;
}

inline uint64_t fnv1a(const std::string& s, uint64_t h) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

// Loads the embedded dataset, or the directory named by CYQC_DATASET.
inline Dataset load_dataset() {
  Dataset d;
  const char* override_dir = std::getenv("CYQC_DATASET");
  if (override_dir) {
    for (int i = 1; i <= 10; ++i) {
      std::string name = "table" + std::to_string(i);
      std::ifstream in(std::string(override_dir) + "/" + name + ".tsv");
      if (!in) throw std::runtime_error("CYQC_DATASET: missing " + name + ".tsv");
      std::ostringstream os;
      os << in.rdbuf();
      d.raw[name] = os.str();
    }
  } else {
    for (const auto& [name, content] : embedded::tables()) d.raw[name] = content;
  }
  uint64_t h = 1469598103934665603ull;
  for (const auto& [name, content] : d.raw) {
    h = detail::fnv1a(name, h);
    h = detail::fnv1a(content, h);
  }
  char buf[32];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  d.checksum = buf;

  auto rows = [&](const std::string& name) {
    auto it = d.raw.find(name);
    if (it == d.raw.end()) throw std::runtime_error("dataset missing " + name);
    return detail::parse_tsv(it->second, name);
  };
  // malformed rows are fatal, with their location
  long row_index = 0;
  std::string table_name;
  auto located = [&](auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      throw std::runtime_error(table_name + " row " + std::to_string(row_index) + ": " +
                               e.what());
    }
  };
  auto each = [&](const std::string& name, auto&& body) {
    table_name = name;
    row_index = 0;
    for (const auto& c : rows(name)) {
      ++row_index;
      located([&] { body(c); });
    }
  };

  each("table1", [&](const std::vector<std::string>& c) {
    PullbackRule r;
    r.src = c.at(0);
    if (c.at(1) != "*") {
      auto p = c[1].find('%');
      r.residue = std::stol(c[1].substr(0, p));
      r.period = std::stol(c[1].substr(p + 1));
    }
    r.dst = c.at(2);
    d.table1.push_back(r);
  });
  each("table2", [&](const std::vector<std::string>& c) {
    d.table2.push_back({c.at(0), c.at(1), c.at(2)});
  });
  each("table3", [&](const std::vector<std::string>& c) {
    Table3Row r;
    r.m = std::stol(c.at(0));
    for (const auto& t : detail::split_top(c.at(1), ','))
      r.types.push_back(parse_fiber(detail::strip(t)));
    d.table3.push_back(r);
  });
  each("table4", [&](const std::vector<std::string>& c) {
    if (c.size() != 9) throw std::invalid_argument("table4: expected 9 columns");
    Table4Row r;
    r.id = std::stoi(c[0]);
    r.m = std::stol(c[1]);
    r.f0_quotient = parse_fiber(c[2]);
    r.mw_quotient = parse_spec(c[3]);
    r.tors_quotient = parse_factors(c[4]);
    r.f0_cover = parse_fiber(c[5]);
    r.mw_cover = parse_spec(c[6]);
    r.tors_cover = parse_factors(c[7]);
    r.t_cover = parse_spec(c[8]);
    d.table4.push_back(r);
  });
  each("table5", [&](const std::vector<std::string>& c) {
    Table5Row r;
    r.case_id = std::stoi(c.at(0));
    r.d = std::stol(c.at(1));
    r.ker = parse_spec(c.at(2));
    r.ker_tors = parse_factors(c.at(3));
    r.ker_d1 = parse_spec(c.at(4));
    r.ker_d1_tors = parse_factors(c.at(5));
    d.table5.push_back(r);
  });
  each("table6", [&](const std::vector<std::string>& c) {
    Table6Row r;
    r.id = std::stoi(c.at(0));
    r.group = parse_factors(c.at(1));
    r.dim = std::stoi(c.at(2));
    r.config = parse_config(c.at(3));
    r.t = parse_spec(c.at(4));
    r.mw = parse_spec(c.at(5));
    r.tors = parse_factors(c.at(6));
    d.table6.push_back(r);
  });
  each("table7", [&](const std::vector<std::string>& c) {
    Table7Row r;
    r.id = std::stoi(c.at(0));
    r.configs = detail::parse_config_list(c.at(1));
    d.table7.push_back(r);
  });
  each("table8", [&](const std::vector<std::string>& c) {
    d.table8.push_back(detail::parse_second_kind_row(c, "table8"));
  });
  each("table9", [&](const std::vector<std::string>& c) {
    d.table9.push_back(detail::parse_second_kind_row(c, "table9"));
  });
  each("table10", [&](const std::vector<std::string>& c) {
    Table10Row r;
    r.group = parse_factors(c.at(0));
    r.m = std::stol(c.at(1));
    r.h = std::stoi(c.at(2));
    r.cases = c.at(3);
    r.strata = detail::parse_case_string(r.cases);
    d.table10.push_back(r);
  });
  return d;
}

inline const Dataset& dataset() {
  static const Dataset d = load_dataset();
  return d;
}

}  // namespace cyqc
