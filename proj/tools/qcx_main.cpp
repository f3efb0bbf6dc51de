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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qcx/harness.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> workers;
  bool serial = false;
  std::vector<std::string> sets;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON config file (env QCX_CONFIG)");
  app->add_option("--seed", f.seed, "master seed (env QCX_SEED, default 1)");
  app->add_option("--out", f.out, "output directory (env QCX_OUT)");
  app->add_option("--workers", f.workers, "worker threads (env QCX_WORKERS, default 1)")->check(CLI::PositiveNumber);
  app->add_flag("--serial", f.serial, "force a single worker");
  app->add_option("--set", f.sets, "override a config value, KEY.PATH=VALUE (repeatable)");
}

qcx::Json load_config(const std::string& path) {
  if (path.empty()) return qcx::Json::object();
  std::ifstream in(path);
  if (!in) throw qcx::ConfigError(fmt::format("cannot read config '{}'", path));
  qcx::Json j = qcx::Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw qcx::ConfigError(fmt::format("config '{}' is not valid JSON", path));
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcx: gate-count and pulse-time complexity of qudit states and unitaries"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qcx::library_version()));

  CommonFlags flags;
  // Subcommand specific flags become --set overrides.
  std::vector<std::pair<std::string, std::string>> shortcuts;
  auto shortcut = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&shortcuts, key](const std::string& v) { shortcuts.emplace_back(key, v); }, help);
  };
  auto target_shortcuts = [&](CLI::App* sub) {
    shortcut(sub, "--n", "target.n", "number of qudits");
    shortcut(sub, "--d", "target.d", "levels per qudit");
    shortcut(sub, "--kind", "target.kind", "state or unitary");
    shortcut(sub, "--target-seed", "target.seed", "seed of the random target");
    sub->add_option_function<std::string>(
        "--target-file",
        [&shortcuts](const std::string& v) {
          shortcuts.emplace_back("target.source", "\"file\"");
          shortcuts.emplace_back("target.path", qcx::Json(v).dump());
        },
        "load the target from a JSON file");
  };

  std::map<std::string, CLI::App*> subs;
  auto add_sub = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    subs[name] = sub;
    return sub;
  };

  CLI::App* bounds = add_sub("bounds", "parameter-counting lower bounds on the entangling-gate count");
  shortcut(bounds, "--n-max", "n_max", "largest qudit count");
  shortcut(bounds, "--d-max", "d_max", "largest qudit dimension");
  target_shortcuts(add_sub("gen-target", "generate a random target state or unitary"));
  CLI::App* synth = add_sub("synth-search", "minimum number of CZ gates for a target");
  target_shortcuts(synth);
  shortcut(synth, "--search", "search", "exhaustive or probabilistic");
  CLI::App* grape = add_sub("grape", "optimize control pulses at a fixed duration");
  target_shortcuts(grape);
  shortcut(grape, "--time", "time_tcz2", "pulse duration in units of the two-qubit CZ time");
  target_shortcuts(add_sub("min-time", "minimum pulse duration reaching the fidelity threshold"));
  target_shortcuts(add_sub("speed-est", "commutator-hierarchy time estimate (heuristic)"));
  CLI::App* ctrl = add_sub("controllability", "Lie-algebra rank of a control model");
  shortcut(ctrl, "--n", "n", "number of qudits");
  shortcut(ctrl, "--d", "d", "levels per qudit");
  CLI::App* suite = add_sub("suite", "run a named experiment suite");
  std::string suite_name;
  bool include_slow = false;
  suite->add_option("name", suite_name, "suite name")->required();
  suite->add_flag("--include-slow", include_slow, "also run entries tagged slow");

  CLI::App* table = app.add_subcommand("table", "render the gate-count or minimum-time table from run records");
  std::string table_kind;
  std::vector<std::string> table_inputs;
  std::string table_out;
  table->add_option("table", table_kind, "one or two")->required();
  table->add_option("records", table_inputs, "record files or run directories")->required();
  table->add_option("--out", table_out, "write the CSV here instead of stdout");

  CLI::App* replay = app.add_subcommand("replay", "re-run a record serially and compare outputs");
  std::string replay_path;
  replay->add_option("record", replay_path, "record.json of a previous run")->required();

  // Unknown subcommands get their own exit code.
  if (argc > 1 && argv[1][0] != '-') {
    const std::string first = argv[1];
    if (!qcx::is_run_subcommand(first) && first != "table" && first != "replay") {
      std::cerr << fmt::format("qcx: unknown subcommand '{}'\n", first);
      return qcx::kExitUsage;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return argc > 1 ? qcx::kExitConfig : qcx::kExitUsage;
  }

  try {
    if (table->parsed()) {
      std::vector<std::filesystem::path> paths(table_inputs.begin(), table_inputs.end());
      const std::string csv = qcx::regenerate_table(qcx::collect_records(paths), qcx::table_kind_from_string(table_kind));
      if (table_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream(table_out) << csv;
      }
      return qcx::kExitOk;
    }
    if (replay->parsed()) {
      const qcx::RunRecord record = qcx::load_record(replay_path);
      const qcx::ReplayResult r = qcx::replay(record);
      for (const std::string& d : r.differences) std::cout << "differs: " << d << "\n";
      std::cout << (r.identical ? "identical" : "outputs differ") << "\n";
      return r.identical ? qcx::kExitOk : qcx::kExitFailure;
    }

    std::string name;
    for (const auto& [n, sub] : subs) {
      if (sub->parsed()) name = n;
    }
    std::string config_path = flags.config;
    if (config_path.empty()) config_path = env("QCX_CONFIG").value_or("");
    qcx::Json user = load_config(config_path);
    if (name == "suite") {
      user["name"] = suite_name;
      if (include_slow) user["include_slow"] = true;
    }
    for (const auto& [key, value] : shortcuts) qcx::set_config_path(user, key, value);
    for (const std::string& s : flags.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw qcx::ConfigError(fmt::format("--set expects KEY=VALUE, got '{}'", s));
      qcx::set_config_path(user, s.substr(0, eq), s.substr(eq + 1));
    }

    std::uint64_t seed = 1;
    if (flags.seed) {
      seed = *flags.seed;
    } else if (const auto s = env("QCX_SEED")) {
      seed = std::stoull(*s);
    }
    int workers = 1;
    if (flags.workers) {
      workers = *flags.workers;
    } else if (const auto w = env("QCX_WORKERS")) {
      workers = std::max(1, std::stoi(*w));
    }
    if (flags.serial) workers = 1;

    qcx::ExecContext ctx;
    ctx.workers = workers;
    ctx.out_dir = !flags.out.empty() ? flags.out : env("QCX_OUT").value_or("qcx-out/" + name);
    ctx.log = [](const std::string& m) { std::cerr << m << "\n"; };

    const qcx::Json resolved = qcx::resolve_config(name, user, seed);
    const qcx::RunRecord record = qcx::run_and_write(name, resolved, seed, ctx);
    std::cerr << fmt::format("wrote {}\n", (ctx.out_dir / "record.json").string());
    return record.exit_code;
  } catch (const qcx::ConfigError& e) {
    std::cerr << "qcx: config error: " << e.what() << "\n";
    return qcx::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qcx: invalid input: " << e.what() << "\n";
    return qcx::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qcx: error: " << e.what() << "\n";
    return qcx::kExitFailure;
  }
}
