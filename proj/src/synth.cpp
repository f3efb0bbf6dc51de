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

#include "qcx/synth.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "qcx/optimize.hpp"
#include "qcx/parallel.hpp"

namespace qcx {

Task task_of(const Target& target) {
  return kind_of(target) == TargetKind::state ? Task::state_prep : Task::unitary_synth;
}

namespace {

struct SlotGate {
  HermitianEigen eig;
  Matrix gate;
};

Vector cz_diagonal(const SystemDescriptor& sys, QuditPair pair) {
  const DigitLayout& lay = sys.layout();
  const int d = sys.levels();
  Vector phases(sys.rows());
  for (std::size_t i = 0; i < lay.dim; ++i) {
    const int k = lay.digit(i, pair.first);
    const int l = lay.digit(i, pair.second);
    phases(static_cast<Eigen::Index>(i)) = std::polar(1.0, 2.0 * std::numbers::pi * ((k * l) % d) / d);
  }
  return phases;
}

std::vector<SlotGate> slot_gates(const ParamLayout& layout, int d, std::span<const double> params) {
  std::vector<SlotGate> out;
  out.reserve(layout.slots.size());
  for (const GateSlot& slot : layout.slots) {
    HermitianEigen eig =
        hermitian_eigen(single_qudit_generator(params.subspan(slot.offset, slot.length), d, slot.mode));
    Matrix gate = expi(eig, 1.0);
    out.push_back({std::move(eig), std::move(gate)});
  }
  return out;
}

// Writes scale * Re(conj(f) * d/dtheta Tr(P u(theta))) for every parameter of the slot.
void accumulate_slot_gradient(const GateSlot& slot, const SlotGate& sg, const Matrix& p, Complex f,
                              double scale, const GeneratorBasis& basis, std::span<double> grad) {
  const Matrix& w = sg.eig.vectors;
  const Matrix phi = expi_divided_differences(sg.eig, 1.0);
  const Matrix r = (w.adjoint() * p * w).transpose().cwiseProduct(phi);
  // sum_xy r_xy (W^dag G W)_xy = sum_ij G_ij (conj(W) r W^T)_ij
  const Matrix s = w.conjugate() * r * w.transpose();
  for (std::size_t a = 0; a < slot.length; ++a) {
    const Complex df = basis.generators[a].cwiseProduct(s).sum();
    grad[slot.offset + a] = scale * std::real(std::conj(f) * df);
  }
}

}  // namespace

CircuitObjective::CircuitObjective(Target target, CircuitConfig config, ParamLayout layout)
    : target_(std::move(target)), config_(std::move(config)), layout_(std::move(layout)) {
  if (!(system_of(target_) == config_.system())) {
    throw std::invalid_argument("target and circuit act on different registers");
  }
  if (task_of(target_) != layout_.task) {
    throw std::invalid_argument("target kind does not match the circuit layout task");
  }
  for (const auto& pair : config_.pairs()) cz_phases_.push_back(cz_diagonal(config_.system(), pair));
}

double CircuitObjective::fidelity(std::span<const double> params) const {
  return layout_.task == Task::state_prep ? state_pass(params, {}) : unitary_pass(params, {});
}

double CircuitObjective::fidelity_and_gradient(std::span<const double> params, std::span<double> grad) const {
  if (grad.size() != layout_.total) throw std::invalid_argument("gradient buffer has wrong size");
  return layout_.task == Task::state_prep ? state_pass(params, grad) : unitary_pass(params, grad);
}

double CircuitObjective::unitary_pass(std::span<const double> params, std::span<double> grad) const {
  if (params.size() != layout_.total) throw std::invalid_argument("wrong parameter count");
  const SystemDescriptor& sys = config_.system();
  const DigitLayout& lay = sys.layout();
  const int n = sys.qudits();
  const int d = sys.levels();
  const Matrix& target = std::get<UnitaryMatrix>(target_).matrix();
  const std::vector<SlotGate> gates = slot_gates(layout_, d, params);
  const bool want_grad = !grad.empty();

  std::vector<Matrix> before(want_grad ? gates.size() : 0);
  Matrix fwd = Matrix::Identity(sys.rows(), sys.rows());
  auto forward_slot = [&](std::size_t s) {
    if (want_grad) before[s] = fwd;
    apply_local_left(fwd, gates[s].gate, layout_.slots[s].qudit, lay);
  };
  for (int q = 0; q < n; ++q) forward_slot(static_cast<std::size_t>(q));
  for (std::size_t k = 0; k < cz_phases_.size(); ++k) {
    fwd = cz_phases_[k].asDiagonal() * fwd;
    forward_slot(static_cast<std::size_t>(n) + 2 * k);
    forward_slot(static_cast<std::size_t>(n) + 2 * k + 1);
  }
  const Complex f = target.conjugate().cwiseProduct(fwd).sum();
  const double dim2 = static_cast<double>(sys.dim()) * static_cast<double>(sys.dim());
  const double fid = std::norm(f) / dim2;
  if (!want_grad) return fid;

  const GeneratorBasis& basis = shared_gellmann_basis(d);
  Matrix back = target.adjoint();
  auto backward_slot = [&](std::size_t s) {
    const GateSlot& slot = layout_.slots[s];
    const Matrix p = partial_trace_keep(before[s] * back, slot.qudit, lay);
    accumulate_slot_gradient(slot, gates[s], p, f, 2.0 / dim2, basis, grad);
    apply_local_right(back, gates[s].gate, slot.qudit, lay);
  };
  for (std::size_t k = cz_phases_.size(); k-- > 0;) {
    backward_slot(static_cast<std::size_t>(n) + 2 * k + 1);
    backward_slot(static_cast<std::size_t>(n) + 2 * k);
    back = back * cz_phases_[k].asDiagonal();
  }
  for (int q = n; q-- > 0;) backward_slot(static_cast<std::size_t>(q));
  return fid;
}

double CircuitObjective::state_pass(std::span<const double> params, std::span<double> grad) const {
  if (params.size() != layout_.total) throw std::invalid_argument("wrong parameter count");
  const SystemDescriptor& sys = config_.system();
  const DigitLayout& lay = sys.layout();
  const int n = sys.qudits();
  const int d = sys.levels();
  const Vector& target = std::get<StateVector>(target_).amplitudes();
  const std::vector<SlotGate> gates = slot_gates(layout_, d, params);
  const bool want_grad = !grad.empty();

  std::vector<Vector> before(want_grad ? gates.size() : 0);
  Vector psi = Vector::Zero(sys.rows());
  psi(0) = 1.0;
  auto forward_slot = [&](std::size_t s) {
    if (want_grad) before[s] = psi;
    apply_local(psi, gates[s].gate, layout_.slots[s].qudit, lay);
  };
  for (int q = 0; q < n; ++q) forward_slot(static_cast<std::size_t>(q));
  for (std::size_t k = 0; k < cz_phases_.size(); ++k) {
    psi = psi.cwiseProduct(cz_phases_[k]);
    forward_slot(static_cast<std::size_t>(n) + 2 * k);
    forward_slot(static_cast<std::size_t>(n) + 2 * k + 1);
  }
  const Complex f = target.dot(psi);
  const double fid = std::norm(f);
  if (!want_grad) return fid;

  const GeneratorBasis& basis = shared_gellmann_basis(d);
  // Row vector chi with f = sum_i chi_i psi_i, propagated backwards.
  Vector chi = target.conjugate();
  auto backward_slot = [&](std::size_t s) {
    const GateSlot& slot = layout_.slots[s];
    const Matrix p = partial_trace_keep_outer(before[s], chi, slot.qudit, lay);
    accumulate_slot_gradient(slot, gates[s], p, f, 2.0, basis, grad);
    apply_local(chi, gates[s].gate.transpose(), slot.qudit, lay);
  };
  for (std::size_t k = cz_phases_.size(); k-- > 0;) {
    backward_slot(static_cast<std::size_t>(n) + 2 * k + 1);
    backward_slot(static_cast<std::size_t>(n) + 2 * k);
    chi = chi.cwiseProduct(cz_phases_[k]);
  }
  for (int q = n; q-- > 0;) backward_slot(static_cast<std::size_t>(q));
  return fid;
}

namespace {

struct RestartOutcome {
  std::vector<double> params;
  double fidelity = 0.0;
  bool finite = false;
  int iterations = 0;
};

}  // namespace

ConfigOptimum optimize_config(const Target& target, const CircuitConfig& config, const ParamLayout& layout,
                              const CircuitOptimizerSettings& settings, std::uint64_t seed, int workers) {
  if (settings.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (!(settings.success_threshold > 0.0 && settings.success_threshold < 1.0)) {
    throw std::invalid_argument("success threshold must lie in (0, 1)");
  }
  const CircuitObjective objective(target, config, layout);

  auto run = [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    std::vector<double> x0(objective.size());
    for (double& x : x0) x = rng.uniform(-settings.init_range, settings.init_range);
    GradientObjective fn = [&objective](std::span<const double> x, std::span<double> g) {
      if (g.empty()) return 1.0 - objective.fidelity(x);
      const double fid = objective.fidelity_and_gradient(x, g);
      for (double& gi : g) gi = -gi;
      return 1.0 - fid;
    };
    MinimizerSettings ms;
    ms.direction = QuasiNewton::bfgs;
    ms.max_iterations = settings.max_iterations;
    ms.target_cost = settings.stop_infidelity;
    MinimizerResult res = minimize(fn, std::move(x0), ms);
    RestartOutcome out;
    out.finite = res.finite;
    out.iterations = res.iterations;
    out.fidelity = res.finite ? objective.fidelity(res.x) : 0.0;
    out.params = std::move(res.x);
    return out;
  };
  auto stop = [&](const RestartOutcome& o) {
    return settings.stop_on_success && o.finite && o.fidelity >= settings.success_threshold;
  };
  const auto outcomes =
      parallel_map_until<RestartOutcome>(static_cast<std::size_t>(settings.restarts), workers, run, stop);

  ConfigOptimum best;
  best.restarts_run = static_cast<int>(outcomes.size());
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const RestartOutcome& o = outcomes[r];
    best.iterations += o.iterations;
    if (!o.finite) {
      ++best.failed_restarts;
      continue;
    }
    if (best.best_restart < 0 || o.fidelity > best.fidelity) {
      best.fidelity = o.fidelity;
      best.params = o.params;
      best.best_restart = static_cast<int>(r);
    }
  }
  if (best.best_restart < 0) throw std::runtime_error("every optimizer restart diverged");
  return best;
}

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::exhaustive ? "exhaustive" : "probabilistic";
}

std::string_view to_string(Certificate certificate) {
  switch (certificate) {
    case Certificate::exact:
      return "exact";
    case Certificate::upper_bound:
      return "upper_bound";
    case Certificate::inconclusive:
      break;
  }
  return "inconclusive";
}

SearchMode search_mode_from_string(std::string_view s) {
  if (s == "exhaustive") return SearchMode::exhaustive;
  if (s == "probabilistic") return SearchMode::probabilistic;
  throw std::invalid_argument(fmt::format("unknown search mode '{}'", s));
}

namespace {

struct ConfigRun {
  CircuitConfig config;
  ConfigOptimum optimum;
};

}  // namespace

LevelResult search_level(const SynthesisProblem& problem, std::int64_t entanglers) {
  if (problem.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const SystemDescriptor& sys = system_of(problem.target);
  const Task task = task_of(problem.target);
  const ConfigSpace space(sys, static_cast<std::size_t>(entanglers));
  const bool exhaustive = problem.search == SearchMode::exhaustive || entanglers == 0;
  const std::uint64_t count = exhaustive ? space.size() : static_cast<std::uint64_t>(problem.trials);
  const auto level = static_cast<std::uint64_t>(entanglers);
  const double threshold = problem.optimizer.success_threshold;

  auto run = [&](std::size_t i) {
    CircuitConfig config = [&] {
      if (exhaustive) return space.at(i);
      Rng rng(derive_seed(problem.seed, level, 0x100000000ULL + i));
      return space.sample(rng);
    }();
    const ParamLayout layout = make_layout(config, task);
    ConfigOptimum opt =
        optimize_config(problem.target, config, layout, problem.optimizer, derive_seed(problem.seed, level, i));
    return ConfigRun{std::move(config), std::move(opt)};
  };
  auto stop = [&](const ConfigRun& r) { return r.optimum.fidelity >= threshold; };
  const auto runs = parallel_map_until<ConfigRun>(static_cast<std::size_t>(count), problem.workers, run, stop);

  LevelResult out;
  out.entanglers = entanglers;
  out.configs_tried = runs.size();
  for (const ConfigRun& r : runs) {
    if (!out.best_config || r.optimum.fidelity > out.best_fidelity) {
      out.best_fidelity = r.optimum.fidelity;
      out.best_config = r.config;
      out.best_params = r.optimum.params;
    }
  }
  out.success = out.best_fidelity >= threshold;
  return out;
}

SynthesisReport find_min_gates(const SynthesisProblem& problem) {
  const auto started = std::chrono::steady_clock::now();
  const SystemDescriptor& sys = system_of(problem.target);
  SynthesisReport report;
  report.task = task_of(problem.target);
  report.lower_bound = lower_bound({sys.qudits(), sys.levels(), report.task, Entangler::cz});

  auto finish = [&](const LevelResult& level, Certificate cert) {
    report.solved = true;
    report.entanglers = level.entanglers;
    report.certificate = cert;
    report.winner = level.best_config;
    report.winner_params = level.best_params;
    report.winner_fidelity = level.best_fidelity;
  };

  report.levels.push_back(search_level(problem, 0));
  if (report.levels.back().success) {
    finish(report.levels.back(), Certificate::exact);
  } else if (sys.qudits() >= 2) {
    const std::int64_t first = std::max<std::int64_t>(report.lower_bound, 1);
    const std::int64_t last = report.lower_bound + problem.max_extra_entanglers;
    for (std::int64_t n = first; n <= last; ++n) {
      report.levels.push_back(search_level(problem, n));
      const LevelResult& level = report.levels.back();
      if (level.success) {
        const bool exact = problem.search == SearchMode::exhaustive || n == first;
        finish(level, exact ? Certificate::exact : Certificate::upper_bound);
        break;
      }
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

Json to_json(const LevelResult& level) {
  Json entry{{"entanglers", level.entanglers},
             {"best_fidelity", level.best_fidelity},
             {"configs_tried", level.configs_tried},
             {"success", level.success}};
  if (level.best_config) {
    Json pairs = Json::array();
    for (const auto& [a, b] : level.best_config->pairs()) pairs.push_back(Json::array({a, b}));
    entry["best_pairs"] = pairs;
  }
  return entry;
}

Json to_json(const SynthesisReport& report) {
  Json levels = Json::array();
  for (const LevelResult& l : report.levels) levels.push_back(to_json(l));
  Json j{{"task", std::string(to_string(report.task))},
         {"lower_bound", report.lower_bound},
         {"solved", report.solved},
         {"entanglers", report.entanglers},
         {"certificate", std::string(to_string(report.certificate))},
         {"levels", levels},
         {"winner_fidelity", report.winner_fidelity}};
  if (report.winner) j["winner"] = circuit_to_json(*report.winner, report.task, report.winner_params);
  return j;
}

}  // namespace qcx
