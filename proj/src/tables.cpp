// Copyright 2026 The qcx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "qcx/bounds.hpp"
#include "qcx/harness.hpp"

namespace qcx {

namespace fs = std::filesystem;

namespace {

SuiteEntry synth_entry(int n, int d, std::string_view kind, bool slow, bool probabilistic = false) {
  Json config{{"target", {{"n", n}, {"d", d}, {"kind", kind}}}, {"verify_gap", !probabilistic}};
  if (probabilistic) config["search"] = "probabilistic";
  return {fmt::format("n{}-d{}-{}", n, d, kind), "synth-search", std::move(config), slow};
}

void add_min_time(std::vector<SuiteEntry>& entries, int n, int d, bool slow) {
  for (std::string_view kind : {"state", "unitary"}) {
    for (int seed = 1; seed <= 5; ++seed) {
      Json config{{"target", {{"n", n}, {"d", d}, {"kind", kind}, {"seed", seed}}}};
      entries.push_back({fmt::format("n{}-d{}-{}-s{}", n, d, kind, seed), "min-time", std::move(config), slow});
    }
  }
}

std::vector<ExperimentSuite> make_suites() {
  std::vector<SuiteEntry> small;
  for (int d = 2; d <= 4; ++d) {
    small.push_back(synth_entry(2, d, "state", false));
    small.push_back(synth_entry(2, d, "unitary", false));
  }
  std::vector<SuiteEntry> full = small;
  full.push_back(synth_entry(3, 2, "state", false));
  full.push_back(synth_entry(3, 2, "unitary", true));
  full.push_back(synth_entry(3, 3, "state", true));
  full.push_back(synth_entry(3, 4, "state", true));
  full.push_back(synth_entry(4, 2, "state", true, true));
  full.push_back(synth_entry(4, 2, "unitary", true, true));
  full.push_back(synth_entry(4, 3, "state", true, true));
  full.push_back(synth_entry(4, 4, "state", true, true));

  std::vector<SuiteEntry> t2small;
  add_min_time(t2small, 2, 2, false);
  std::vector<SuiteEntry> t2 = t2small;
  add_min_time(t2, 3, 2, true);
  add_min_time(t2, 4, 2, true);
  add_min_time(t2, 2, 3, true);
  add_min_time(t2, 3, 3, true);

  return {
      {"table1-small", "two-qudit gate counts for d = 2, 3, 4", std::move(small)},
      {"table1", "gate counts for every feasible cell of the gate-count table", std::move(full)},
      {"table2-n2d2", "two-qubit minimum times over five random targets", std::move(t2small)},
      {"table2", "minimum times for every row of the pulse-time table", std::move(t2)},
  };
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

using CellKey = std::tuple<int, int, std::string>;

void put_cell(std::map<CellKey, std::string>& cells, const CellKey& key, const std::string& value) {
  const auto [it, inserted] = cells.emplace(key, value);
  if (!inserted && it->second != value) {
    throw std::runtime_error(fmt::format("conflicting records for cell (n={}, d={}, {}): '{}' vs '{}'",
                                         std::get<0>(key), std::get<1>(key), std::get<2>(key), it->second, value));
  }
}

std::string table_one(const std::vector<RunRecord>& records) {
  std::map<CellKey, std::string> cells;
  for (const RunRecord& r : records) {
    if (r.subcommand != "synth-search") continue;
    const Json& t = r.config.at("target");
    const std::string task = r.outputs.at("task").get<std::string>();
    const std::string cert = r.outputs.at("certificate").get<std::string>();
    const auto n = r.outputs.at("entanglers").get<std::int64_t>();
    std::string text;
    if (cert == "exact") text = std::to_string(n);
    if (cert == "upper_bound") text = fmt::format("≤ {}", n);
    if (!text.empty()) put_cell(cells, {t.at("n").get<int>(), t.at("d").get<int>(), task}, text);
  }
  std::string out = "n,d,state_lower_bound,state_numerical,unitary_lower_bound,unitary_numerical\n";
  for (int d = 2; d <= 4; ++d) {
    for (int n = 2; n <= 4; ++n) {
      auto cell = [&](const char* task) {
        const auto it = cells.find({n, d, task});
        return it == cells.end() ? std::string() : it->second;
      };
      out += fmt::format("{},{},{},{},{},{}\n", n, d, lower_bound({n, d, Task::state_prep, Entangler::cz}),
                         csv_field(cell("state")), lower_bound({n, d, Task::unitary_synth, Entangler::cz}),
                         csv_field(cell("unitary")));
    }
  }
  return out;
}

std::string table_two(const std::vector<RunRecord>& records) {
  struct Cell {
    std::map<std::uint64_t, std::string> values;
    double mean = 0.0;
    double spacing = 0.0;
    int count = 0;
  };
  std::map<CellKey, Cell> cells;
  for (const RunRecord& r : records) {
    if (r.subcommand != "min-time") continue;
    const Json& t = r.config.at("target");
    Cell& cell = cells[{t.at("n").get<int>(), t.at("d").get<int>(), t.at("kind").get<std::string>()}];
    const Json& tm = r.outputs.at("t_min_tcz2");
    std::string text;
    if (tm.is_null()) {
      text = fmt::format(">{:.3g}", r.config.at("sweep").at("t_max").get<double>());
    } else {
      text = fmt::format("{:.3g}", tm.get<double>());
      cell.mean += tm.get<double>();
      ++cell.count;
    }
    cell.spacing = r.outputs.at("spacing").get<double>();
    const auto seed = t.contains("seed") && t.at("seed").is_number_integer() ? t.at("seed").get<std::uint64_t>()
                                                                              : std::uint64_t{0};
    const auto [it, inserted] = cell.values.emplace(seed, text);
    if (!inserted && it->second != text) {
      throw std::runtime_error(fmt::format("conflicting records for cell (n={}, d={}, {}) seed {}",
                                           t.at("n").get<int>(), t.at("d").get<int>(),
                                           t.at("kind").get<std::string>(), seed));
    }
  }
  auto render = [&](int n, int d, const char* kind) -> std::string {
    const auto it = cells.find({n, d, kind});
    if (it == cells.end()) return "";
    const Cell& c = it->second;
    std::string list;
    for (const auto& [seed, text] : c.values) list += (list.empty() ? "" : ", ") + text;
    if (c.count > 0) list += fmt::format(" ({:.2g})", c.mean / c.count * c.spacing);
    return list;
  };
  std::string out = "n,d,state_preparation,unitary_synthesis\n";
  for (int d = 2; d <= 3; ++d) {
    for (int n = 2; n <= 4; ++n) {
      out += fmt::format("{},{},{},{}\n", n, d, csv_field(render(n, d, "state")), csv_field(render(n, d, "unitary")));
    }
  }
  return out;
}

}  // namespace

const std::vector<ExperimentSuite>& builtin_suites() {
  static const std::vector<ExperimentSuite> suites = make_suites();
  return suites;
}

const ExperimentSuite& find_suite(std::string_view name) {
  for (const ExperimentSuite& s : builtin_suites()) {
    if (s.name == name) return s;
  }
  throw ConfigError(fmt::format("unknown suite '{}'", name));
}

TableKind table_kind_from_string(std::string_view s) {
  if (s == "one" || s == "1") return TableKind::one;
  if (s == "two" || s == "2") return TableKind::two;
  throw ConfigError(fmt::format("unknown table '{}' (expected one or two)", s));
}

std::string regenerate_table(const std::vector<RunRecord>& records, TableKind table) {
  return table == TableKind::one ? table_one(records) : table_two(records);
}

std::vector<RunRecord> collect_records(const std::vector<fs::path>& paths) {
  std::set<fs::path> files;
  for (const fs::path& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::recursive_directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().filename() == "record.json") files.insert(entry.path());
      }
    } else if (fs::exists(p)) {
      files.insert(p);
    } else {
      throw ConfigError(fmt::format("no such file or directory '{}'", p.string()));
    }
  }
  std::vector<RunRecord> out;
  for (const fs::path& f : files) out.push_back(load_record(f));
  return out;
}

}  // namespace qcx
