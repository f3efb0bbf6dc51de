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

#include "qcx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "qcx/bounds.hpp"
#include "qcx/circuits.hpp"
#include "qcx/control.hpp"
#include "qcx/speedest.hpp"
#include "qcx/synth.hpp"

#ifndef QCX_VERSION
#define QCX_VERSION "unknown"
#endif

namespace qcx {

namespace fs = std::filesystem;

std::string_view library_version() { return QCX_VERSION; }

const std::vector<std::string>& run_subcommands() {
  static const std::vector<std::string> names{"bounds",   "gen-target", "synth-search",    "grape",
                                              "min-time", "speed-est",  "controllability", "suite"};
  return names;
}

bool is_run_subcommand(std::string_view name) {
  const auto& names = run_subcommands();
  return std::find(names.begin(), names.end(), name) != names.end();
}

void set_config_path(Json& config, std::string_view path, std::string_view value) {
  if (path.empty()) throw ConfigError("empty override key");
  Json parsed = Json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = std::string(value);
  Json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (key.empty()) throw ConfigError(fmt::format("malformed override key '{}'", path));
    if (!node->is_object()) *node = Json::object();
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(parsed);
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

namespace {

std::string join_key(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_type(const Json& def, const Json& value, const std::string& key) {
  bool ok = true;
  if (def.is_null()) {
    ok = true;
  } else if (def.is_boolean()) {
    ok = value.is_boolean();
  } else if (def.is_number_integer()) {
    ok = value.is_number_integer();
  } else if (def.is_number()) {
    ok = value.is_number();
  } else if (def.is_string()) {
    ok = value.is_string();
  } else if (def.is_array()) {
    ok = value.is_array();
  } else if (def.is_object()) {
    ok = value.is_object();
  }
  if (!ok) throw ConfigError(fmt::format("config key '{}' has the wrong type (expected {})", key, def.type_name()));
}

Json merge_checked(const Json& defaults, const Json& user, const std::string& path) {
  if (!user.is_object()) {
    throw ConfigError(fmt::format("'{}' must be a JSON object", path.empty() ? "config" : path));
  }
  Json out = defaults;
  for (const auto& [k, v] : user.items()) {
    const std::string key = join_key(path, k);
    if (!defaults.contains(k)) throw ConfigError(fmt::format("unknown config key '{}'", key));
    const Json& def = defaults.at(k);
    if (def.is_object() && !def.empty()) {
      out[k] = merge_checked(def, v, key);
    } else {
      check_type(def, v, key);
      out[k] = v;
    }
  }
  return out;
}

Json target_defaults(std::uint64_t seed) {
  return Json{{"source", "random"},
              {"n", 2},
              {"d", 2},
              {"kind", "unitary"},
              {"seed", seed},
              {"randomization_steps", 1000},
              {"index", 0},
              {"path", nullptr},
              {"data", nullptr}};
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read '{}'", path.string()));
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError(fmt::format("'{}' is not valid JSON", path.string()));
  return j;
}

Json finalize_target(Json t) {
  const std::string source = t.at("source").get<std::string>();
  if (source == "file") {
    if (!t.at("path").is_string()) throw ConfigError("target.path is required for source 'file'");
    Json data = read_json_file(t.at("path").get<std::string>());
    // Accept either a bare target or a gen-target record.
    if (data.contains("outputs") && data.at("outputs").contains("target")) data = data.at("outputs").at("target");
    t["data"] = std::move(data);
    t["source"] = "inline";
  }
  if (t.at("source") == "inline") {
    if (!t.at("data").is_object()) throw ConfigError("target.data must hold a serialized target");
    const Target parsed = target_from_json(t.at("data"));
    t["n"] = system_of(parsed).qudits();
    t["d"] = system_of(parsed).levels();
    t["kind"] = std::string(to_string(kind_of(parsed)));
  } else if (source == "cz" || source == "identity") {
    t["kind"] = "unitary";
  } else if (source == "basis") {
    t["kind"] = "state";
  } else if (source != "random") {
    throw ConfigError(fmt::format("unknown target source '{}'", source));
  }
  (void)build_target(t);
  return t;
}

const std::vector<std::string>& model_keys() {
  static const std::vector<std::string> keys{"omegas",   "etas",        "g",        "frame", "policy",
                                             "channels", "quadratures", "amplitude_bound", "scale"};
  return keys;
}

Json resolve_model(const Json& user, const SystemDescriptor& sys) {
  if (!user.is_object()) throw ConfigError("'model' must be a JSON object");
  for (const auto& [k, v] : user.items()) {
    if (std::find(model_keys().begin(), model_keys().end(), k) == model_keys().end()) {
      throw ConfigError(fmt::format("unknown config key 'model.{}'", k));
    }
  }
  return to_json(model_from_json(user, sys));
}

Json optimizer_defaults() {
  const CircuitOptimizerSettings s;
  return Json{{"restarts", s.restarts},
              {"max_iterations", s.max_iterations},
              {"success_threshold", s.success_threshold},
              {"init_range", s.init_range},
              {"stop_infidelity", s.stop_infidelity},
              {"stop_on_success", s.stop_on_success}};
}

Json grape_defaults() {
  const GrapeSettings s;
  return Json{{"restarts", s.restarts},
              {"max_iterations", s.max_iterations},
              {"stop_infidelity", s.stop_infidelity},
              {"success_fidelity", s.success_fidelity},
              {"stop_on_success", s.stop_on_success},
              {"init_scale", s.init_scale}};
}

Json sweep_defaults() {
  const SweepSettings s;
  return Json{{"t_start", s.t_start},     {"ratio", s.ratio},     {"t_max", s.t_max},
              {"threshold", s.threshold}, {"slices", s.slices}, {"warm_start", s.warm_start}};
}

SystemDescriptor target_system(const Json& t) { return SystemDescriptor(t.at("n").get<int>(), t.at("d").get<int>()); }

void require(bool ok, std::string_view message) {
  if (!ok) throw ConfigError(std::string(message));
}

Json resolve_impl(std::string_view sub, const Json& user, std::uint64_t seed) {
  if (sub == "bounds") {
    Json r = merge_checked(Json{{"n_min", 2},
                                {"n_max", 4},
                                {"d_min", 2},
                                {"d_max", 4},
                                {"tasks", Json::array({"state", "unitary"})},
                                {"entanglers", Json::array({"cz"})}},
                           user, "");
    require(r["n_min"].get<int>() >= 1 && r["n_max"].get<int>() >= r["n_min"].get<int>(), "need 1 <= n_min <= n_max");
    require(r["d_min"].get<int>() >= 2 && r["d_max"].get<int>() >= r["d_min"].get<int>(), "need 2 <= d_min <= d_max");
    for (const Json& t : r["tasks"]) (void)task_from_string(t.get<std::string>());
    for (const Json& e : r["entanglers"]) (void)entangler_from_string(e.get<std::string>());
    return r;
  }
  if (sub == "gen-target") {
    Json r = merge_checked(Json{{"target", target_defaults(seed)}}, user, "");
    r["target"] = finalize_target(r["target"]);
    return r;
  }
  if (sub == "synth-search") {
    Json r = merge_checked(Json{{"target", target_defaults(seed)},
                                {"search", "exhaustive"},
                                {"trials", 100},
                                {"max_extra_entanglers", 8},
                                {"verify_gap", false},
                                {"optimizer", optimizer_defaults()}},
                           user, "");
    r["target"] = finalize_target(r["target"]);
    (void)search_mode_from_string(r["search"].get<std::string>());
    require(r["trials"].get<int>() >= 1, "trials must be >= 1");
    require(r["max_extra_entanglers"].get<int>() >= 0, "max_extra_entanglers must be >= 0");
    require(r["optimizer"]["restarts"].get<int>() >= 1, "optimizer.restarts must be >= 1");
    const double thr = r["optimizer"]["success_threshold"].get<double>();
    require(thr > 0.0 && thr < 1.0, "optimizer.success_threshold must lie in (0, 1)");
    return r;
  }
  if (sub == "grape" || sub == "min-time" || sub == "speed-est") {
    Json defaults{{"target", target_defaults(seed)}, {"model", Json::object()}};
    if (sub == "grape") {
      defaults["time_tcz2"] = 1.0;
      defaults["slices"] = 0;
      defaults["grape"] = grape_defaults();
    } else if (sub == "min-time") {
      defaults["sweep"] = sweep_defaults();
      defaults["grape"] = grape_defaults();
    } else {
      defaults["hbar"] = nullptr;
    }
    Json r = merge_checked(defaults, user, "");
    r["target"] = finalize_target(r["target"]);
    const SystemDescriptor sys = target_system(r["target"]);
    r["model"] = resolve_model(r["model"], sys);
    if (sub == "grape") {
      require(r["time_tcz2"].get<double>() > 0.0, "time_tcz2 must be positive");
      require(r["slices"].get<int>() >= 0, "slices must be >= 0");
    }
    if (r.contains("grape")) require(r["grape"]["restarts"].get<int>() >= 1, "grape.restarts must be >= 1");
    if (sub == "min-time") {
      const Json& s = r["sweep"];
      require(s["t_start"].get<double>() > 0.0 && s["ratio"].get<double>() > 1.0 &&
                  s["t_max"].get<double>() >= s["t_start"].get<double>(),
              "sweep needs t_start > 0, ratio > 1 and t_max >= t_start");
      require(s["threshold"].get<double>() > 0.0 && s["threshold"].get<double>() <= 1.0,
              "sweep.threshold must lie in (0, 1]");
    }
    if (sub == "speed-est") {
      require(r["target"]["kind"] == "unitary", "speed-est needs a unitary target");
      if (r["hbar"].is_null()) {
        r["hbar"] = default_hbar(build_hamiltonian(model_from_json(r["model"], sys)));
      }
      require(r["hbar"].is_number() && r["hbar"].get<double>() > 0.0, "hbar must be positive");
    }
    return r;
  }
  if (sub == "controllability") {
    Json r = merge_checked(Json{{"n", 2}, {"d", 2}, {"model", Json::object()}}, user, "");
    const SystemDescriptor sys(r["n"].get<int>(), r["d"].get<int>());
    r["model"] = resolve_model(r["model"], sys);
    return r;
  }
  if (sub == "suite") {
    Json r = merge_checked(Json{{"name", "table1-small"}, {"include_slow", false}}, user, "");
    (void)find_suite(r["name"].get<std::string>());
    return r;
  }
  throw ConfigError(fmt::format("unknown subcommand '{}'", sub));
}

}  // namespace

Json resolve_config(std::string_view subcommand, const Json& user, std::uint64_t seed) {
  try {
    return resolve_impl(subcommand, user, seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
}

Target build_target(const Json& t) {
  const std::string source = t.at("source").get<std::string>();
  if (source == "inline") return target_from_json(t.at("data"));
  const SystemDescriptor sys = target_system(t);
  if (source == "random") {
    RandomTargetSpec spec{sys, target_kind_from_string(t.at("kind").get<std::string>())};
    spec.seed = t.at("seed").get<std::uint64_t>();
    spec.randomization_steps = t.at("randomization_steps").get<int>();
    return random_target(spec);
  }
  if (source == "identity") return UnitaryMatrix::identity(sys);
  if (source == "cz") {
    if (sys.qudits() < 2) throw std::invalid_argument("a CZ target needs at least two qudits");
    return embed_two_qudit(cz_gate(sys.levels()), {0, 1}, sys);
  }
  if (source == "basis") return StateVector::basis(sys, t.at("index").get<std::size_t>());
  throw std::invalid_argument(fmt::format("unknown target source '{}'", source));
}

Json to_json(const RunRecord& r) {
  return Json{{"schema_version", r.schema_version},
              {"subcommand", r.subcommand},
              {"config", r.config},
              {"seed", r.seed},
              {"workers", r.workers},
              {"started", r.started},
              {"finished", r.finished},
              {"library_version", r.version},
              {"exit_code", r.exit_code},
              {"outputs", r.outputs}};
}

RunRecord record_from_json(const Json& j) {
  RunRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    throw ConfigError(fmt::format("unsupported record schema version {}", r.schema_version));
  }
  r.subcommand = j.at("subcommand").get<std::string>();
  r.config = j.at("config");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.workers = j.value("workers", 1);
  r.started = j.value("started", "");
  r.finished = j.value("finished", "");
  r.version = j.value("library_version", "");
  r.exit_code = j.value("exit_code", 0);
  r.outputs = j.at("outputs");
  return r;
}

RunRecord load_record(const fs::path& path) {
  try {
    return record_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError(fmt::format("'{}' is not a run record: {}", path.string(), e.what()));
  }
}

namespace {

std::string now_utc() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                  std::chrono::system_clock::now())));
}

void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << content;
    if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
  }
  fs::rename(tmp, path);
}

void log(const ExecContext& ctx, const std::string& message) {
  if (ctx.log) ctx.log(message);
}

CircuitOptimizerSettings optimizer_from(const Json& j) {
  CircuitOptimizerSettings s;
  s.restarts = j.at("restarts").get<int>();
  s.max_iterations = j.at("max_iterations").get<int>();
  s.success_threshold = j.at("success_threshold").get<double>();
  s.init_range = j.at("init_range").get<double>();
  s.stop_infidelity = j.at("stop_infidelity").get<double>();
  s.stop_on_success = j.at("stop_on_success").get<bool>();
  return s;
}

GrapeSettings grape_from(const Json& j, int workers) {
  GrapeSettings s;
  s.restarts = j.at("restarts").get<int>();
  s.max_iterations = j.at("max_iterations").get<int>();
  s.stop_infidelity = j.at("stop_infidelity").get<double>();
  s.success_fidelity = j.at("success_fidelity").get<double>();
  s.stop_on_success = j.at("stop_on_success").get<bool>();
  s.init_scale = j.at("init_scale").get<double>();
  s.workers = workers;
  return s;
}

HamiltonianModel model_from(const Json& resolved) {
  const SystemDescriptor sys = resolved.contains("target")
                                   ? target_system(resolved.at("target"))
                                   : SystemDescriptor(resolved.at("n").get<int>(), resolved.at("d").get<int>());
  return model_from_json(resolved.at("model"), sys);
}

RunOutput exec_bounds(const Json& c) {
  RunOutput out;
  Json rows = Json::array();
  out.summary_csv = "n,d,task,entangler,lower_bound\n";
  for (int d = c["d_min"].get<int>(); d <= c["d_max"].get<int>(); ++d) {
    for (int n = c["n_min"].get<int>(); n <= c["n_max"].get<int>(); ++n) {
      for (const Json& tj : c["tasks"]) {
        const Task task = task_from_string(tj.get<std::string>());
        for (const Json& ej : c["entanglers"]) {
          const Entangler e = entangler_from_string(ej.get<std::string>());
          const std::int64_t lb = lower_bound({n, d, task, e});
          rows.push_back({{"n", n},
                          {"d", d},
                          {"task", std::string(to_string(task))},
                          {"entangler", std::string(to_string(e))},
                          {"lower_bound", lb}});
          out.summary_csv += fmt::format("{},{},{},{},{}\n", n, d, to_string(task), to_string(e), lb);
        }
      }
    }
  }
  out.outputs = Json{{"rows", rows}};
  return out;
}

RunOutput exec_gen_target(const Json& c) {
  const Target target = build_target(c["target"]);
  const SystemDescriptor& sys = system_of(target);
  RunOutput out;
  out.outputs = Json{{"target", to_json(target)}};
  out.summary_csv = fmt::format("n,d,kind,source,seed\n{},{},{},{},{}\n", sys.qudits(), sys.levels(),
                                to_string(kind_of(target)), c["target"]["source"].get<std::string>(),
                                c["target"]["seed"].dump());
  return out;
}

RunOutput exec_synth(const Json& c, std::uint64_t seed, const ExecContext& ctx) {
  SynthesisProblem problem(build_target(c["target"]));
  problem.search = search_mode_from_string(c["search"].get<std::string>());
  problem.trials = c["trials"].get<int>();
  problem.max_extra_entanglers = c["max_extra_entanglers"].get<int>();
  problem.optimizer = optimizer_from(c["optimizer"]);
  problem.seed = seed;
  problem.workers = ctx.workers;
  const SynthesisReport report = find_min_gates(problem);

  RunOutput out;
  out.outputs = to_json(report);
  Json gap = nullptr;
  if (c["verify_gap"].get<bool>() && report.solved && report.entanglers >= 1) {
    const auto below = report.entanglers - 1;
    const auto it = std::find_if(report.levels.begin(), report.levels.end(),
                                 [&](const LevelResult& l) { return l.entanglers == below; });
    const LevelResult level = it != report.levels.end() ? *it : search_level(problem, below);
    out.outputs["gap_level"] = to_json(level);
    gap = level.best_fidelity;
  }
  const SystemDescriptor& sys = system_of(problem.target);
  out.summary_csv = fmt::format(
      "task,n,d,lower_bound,entanglers,certificate,fidelity,gap_fidelity\n{},{},{},{},{},{},{},{}\n",
      to_string(report.task), sys.qudits(), sys.levels(), report.lower_bound, report.entanglers,
      to_string(report.certificate), format_real(report.winner_fidelity),
      gap.is_null() ? std::string() : format_real(gap.get<double>()));
  out.exit_code = report.solved ? kExitOk : kExitInconclusive;
  return out;
}

RunOutput exec_grape(const Json& c, std::uint64_t seed, const ExecContext& ctx) {
  const Target target = build_target(c["target"]);
  const HamiltonianModel model = model_from(c);
  const double tcz = t_cz2(model.g);
  const double duration = c["time_tcz2"].get<double>() * tcz;
  const int slices = c["slices"].get<int>() > 0 ? c["slices"].get<int>() : default_slices(duration, model.g);
  const GrapeResult r = grape_optimize(target, model, duration, slices, grape_from(c["grape"], ctx.workers), seed);
  RunOutput out;
  out.outputs = Json{{"fidelity", r.fidelity},
                     {"time_tcz2", c["time_tcz2"]},
                     {"t_cz2", tcz},
                     {"slices", slices},
                     {"best_restart", r.best_restart},
                     {"restarts_run", r.restarts_run},
                     {"iterations", r.iterations},
                     {"schedule", to_json(r.schedule)}};
  out.summary_csv = fmt::format("time_tcz2,slices,fidelity\n{},{},{}\n", format_real(c["time_tcz2"].get<double>()),
                                slices, format_real(r.fidelity));
  out.pulses_csv = schedule_to_csv(r.schedule, model.channels);
  return out;
}

RunOutput exec_min_time(const Json& c, std::uint64_t seed, const ExecContext& ctx) {
  const Target target = build_target(c["target"]);
  const HamiltonianModel model = model_from(c);
  SweepSettings s;
  const Json& sj = c["sweep"];
  s.t_start = sj["t_start"].get<double>();
  s.ratio = sj["ratio"].get<double>();
  s.t_max = sj["t_max"].get<double>();
  s.threshold = sj["threshold"].get<double>();
  s.slices = sj["slices"].get<int>();
  s.warm_start = sj["warm_start"].get<bool>();
  s.grape = grape_from(c["grape"], ctx.workers);
  const MinTimeResult r = min_time_sweep(target, model, s, seed);
  RunOutput out;
  out.outputs = to_json(r);
  out.summary_csv = "time_tcz2,slices,fidelity\n";
  for (const MinTimePoint& p : r.trace) {
    out.summary_csv += fmt::format("{},{},{}\n", format_real(p.time_tcz2), p.slices, format_real(p.fidelity));
  }
  if (r.best_schedule) out.pulses_csv = schedule_to_csv(*r.best_schedule, model.channels);
  out.exit_code = r.reached ? kExitOk : kExitInconclusive;
  return out;
}

RunOutput exec_speed(const Json& c) {
  const Target target = build_target(c["target"]);
  const HamiltonianModel model = model_from(c);
  const ControlSystem cs = build_hamiltonian(model);
  const HierarchyDecomposition dec = hierarchy_decompose(std::get<UnitaryMatrix>(target), cs.h0, cs.controls);
  const double hbar = c["hbar"].get<double>();
  const double estimate = time_estimate(dec, hbar);
  RunOutput out;
  out.outputs = Json{{"kind", "heuristic"},
                     {"estimate", estimate},
                     {"estimate_tcz2", estimate / t_cz2(model.g)},
                     {"hbar", hbar},
                     {"decomposition", to_json(dec)}};
  out.summary_csv = "depth,dimension,norm\n";
  for (const HierarchyLayer& l : dec.layers) {
    out.summary_csv += fmt::format("{},{},{}\n", l.depth, l.basis.size(), format_real(l.norm));
  }
  return out;
}

RunOutput exec_controllability(const Json& c) {
  const HamiltonianModel model = model_from(c);
  const ControlSystem cs = build_hamiltonian(model);
  std::vector<Matrix> gens{cs.h0};
  gens.insert(gens.end(), cs.controls.begin(), cs.controls.end());
  const auto layers = commutator_layers(gens);
  Json dims = Json::array();
  std::size_t rank = 0;
  for (const auto& l : layers) {
    dims.push_back(l.size());
    rank += l.size();
  }
  const std::size_t full = model.system.dim() * model.system.dim() - 1;
  RunOutput out;
  out.outputs = Json{{"rank", rank},
                     {"full_rank", full},
                     {"controllable", rank == full},
                     {"depth", layers.size()},
                     {"layer_dimensions", dims},
                     {"channels", model.channels.size()}};
  out.summary_csv = fmt::format("n,d,rank,full_rank,depth\n{},{},{},{},{}\n", model.system.qudits(),
                                model.system.levels(), rank, full, layers.size());
  return out;
}

RunOutput exec_suite(const Json& c, std::uint64_t seed, const ExecContext& ctx) {
  const ExperimentSuite& suite = find_suite(c["name"].get<std::string>());
  const bool include_slow = c["include_slow"].get<bool>();
  RunOutput out;
  Json entries = Json::array();
  out.summary_csv = "entry,subcommand,slow,ran,exit_code\n";
  for (const SuiteEntry& e : suite.entries) {
    const bool run = include_slow || !e.slow;
    Json entry{{"name", e.name}, {"subcommand", e.subcommand}, {"slow", e.slow}, {"ran", run}};
    int code = 0;
    if (run) {
      log(ctx, fmt::format("[{}] {}", suite.name, e.name));
      ExecContext sub = ctx;
      sub.out_dir = ctx.out_dir / e.name;
      const RunRecord rec = run_and_write(e.subcommand, resolve_config(e.subcommand, e.config, seed), seed, sub);
      code = rec.exit_code;
      entry["exit_code"] = code;
      entry["outputs"] = rec.outputs;
      if (code == kExitInconclusive && out.exit_code == kExitOk) out.exit_code = kExitInconclusive;
    }
    out.summary_csv += fmt::format("{},{},{},{},{}\n", e.name, e.subcommand, e.slow, run, run ? std::to_string(code) : "");
    entries.push_back(std::move(entry));
  }
  out.outputs = Json{{"suite", suite.name}, {"entries", entries}};
  return out;
}

}  // namespace

RunOutput execute(std::string_view sub, const Json& c, std::uint64_t seed, const ExecContext& ctx) {
  if (sub == "bounds") return exec_bounds(c);
  if (sub == "gen-target") return exec_gen_target(c);
  if (sub == "synth-search") return exec_synth(c, seed, ctx);
  if (sub == "grape") return exec_grape(c, seed, ctx);
  if (sub == "min-time") return exec_min_time(c, seed, ctx);
  if (sub == "speed-est") return exec_speed(c);
  if (sub == "controllability") return exec_controllability(c);
  if (sub == "suite") return exec_suite(c, seed, ctx);
  throw ConfigError(fmt::format("unknown subcommand '{}'", sub));
}

RunRecord run_and_write(std::string_view sub, const Json& resolved, std::uint64_t seed, const ExecContext& ctx) {
  RunRecord rec;
  rec.subcommand = std::string(sub);
  rec.config = resolved;
  rec.seed = seed;
  rec.workers = ctx.workers;
  rec.version = std::string(library_version());
  rec.started = now_utc();
  fs::create_directories(ctx.out_dir);
  RunOutput out = execute(sub, resolved, seed, ctx);
  rec.finished = now_utc();
  rec.outputs = std::move(out.outputs);
  rec.exit_code = out.exit_code;
  write_file(ctx.out_dir / "summary.csv", out.summary_csv);
  if (out.pulses_csv) write_file(ctx.out_dir / "pulses.csv", *out.pulses_csv);
  write_file(ctx.out_dir / "record.json", to_json(rec).dump(2) + "\n");
  return rec;
}

std::vector<std::string> json_differences(const Json& a, const Json& b, const std::string& prefix) {
  std::vector<std::string> diffs;
  const std::string here = prefix.empty() ? "/" : prefix;
  if (a.is_object() && b.is_object()) {
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k)) {
        diffs.push_back(prefix + "/" + k + " (missing)");
      } else {
        auto sub = json_differences(v, b.at(k), prefix + "/" + k);
        diffs.insert(diffs.end(), sub.begin(), sub.end());
      }
    }
    for (const auto& [k, v] : b.items()) {
      if (!a.contains(k)) diffs.push_back(prefix + "/" + k + " (added)");
    }
  } else if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto sub = json_differences(a[i], b[i], prefix + "/" + std::to_string(i));
      diffs.insert(diffs.end(), sub.begin(), sub.end());
    }
  } else if (a != b) {
    diffs.push_back(fmt::format("{}: {} != {}", here, a.dump(), b.dump()));
  }
  return diffs;
}

ReplayResult replay(const RunRecord& record) {
  static std::atomic<int> counter{0};
  const fs::path scratch = fs::temp_directory_path() /
                           fmt::format("qcx-replay-{}-{}", std::chrono::steady_clock::now().time_since_epoch().count(),
                                       counter++);
  ExecContext ctx;
  ctx.workers = 1;
  ctx.out_dir = scratch;
  fs::create_directories(scratch);
  ReplayResult result;
  try {
    result.outputs = execute(record.subcommand, record.config, record.seed, ctx).outputs;
  } catch (...) {
    fs::remove_all(scratch);
    throw;
  }
  fs::remove_all(scratch);
  result.differences = json_differences(record.outputs, result.outputs);
  result.identical = result.differences.empty();
  return result;
}

}  // namespace qcx
