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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qcx/circuits.hpp"
#include "qcx/serialize.hpp"
#include "qcx/targets.hpp"

namespace qcx {

Task task_of(const Target& target);

/// Fidelity of a parameterized CZ circuit against a fixed target, with the
/// exact parameter gradient from one forward and one backward sweep.
class CircuitObjective {
 public:
  CircuitObjective(Target target, CircuitConfig config, ParamLayout layout);

  std::size_t size() const { return layout_.total; }
  double fidelity(std::span<const double> params) const;
  /// Writes dF/dtheta into `grad` (length size()) and returns F.
  double fidelity_and_gradient(std::span<const double> params, std::span<double> grad) const;

 private:
  double unitary_pass(std::span<const double> params, std::span<double> grad) const;
  double state_pass(std::span<const double> params, std::span<double> grad) const;

  Target target_;
  CircuitConfig config_;
  ParamLayout layout_;
  std::vector<Vector> cz_phases_;
};

struct CircuitOptimizerSettings {
  int restarts = 20;
  int max_iterations = 3000;
  double success_threshold = 1.0 - 1e-9;
  /// Initial parameters are uniform on [-init_range, init_range].
  double init_range = 3.141592653589793;
  /// Individual runs stop once 1 - F drops below this.
  double stop_infidelity = 1e-13;
  /// Skip the remaining restarts once one reaches the success threshold.
  bool stop_on_success = true;
};

struct ConfigOptimum {
  std::vector<double> params;
  double fidelity = 0.0;
  int best_restart = -1;
  int restarts_run = 0;
  int failed_restarts = 0;
  long iterations = 0;
};

/// Best parameters over independent random restarts, each refined by BFGS on
/// 1 - F. Restart r draws its start from derive_seed(seed, r). Throws if
/// every restart produced a non-finite fidelity.
ConfigOptimum optimize_config(const Target& target, const CircuitConfig& config, const ParamLayout& layout,
                              const CircuitOptimizerSettings& settings, std::uint64_t seed, int workers = 1);

enum class SearchMode { exhaustive, probabilistic };
enum class Certificate { exact, upper_bound, inconclusive };

std::string_view to_string(SearchMode mode);
std::string_view to_string(Certificate certificate);
SearchMode search_mode_from_string(std::string_view s);

struct SynthesisProblem {
  explicit SynthesisProblem(Target t) : target(std::move(t)) {}

  Target target;
  SearchMode search = SearchMode::exhaustive;
  int trials = 100;
  CircuitOptimizerSettings optimizer;
  /// Give up (inconclusive) after lower_bound + max_extra_entanglers.
  int max_extra_entanglers = 8;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct LevelResult {
  std::int64_t entanglers = 0;
  double best_fidelity = 0.0;
  std::uint64_t configs_tried = 0;
  bool success = false;
  std::optional<CircuitConfig> best_config;
  std::vector<double> best_params;
};

struct SynthesisReport {
  Task task = Task::unitary_synth;
  std::int64_t lower_bound = 0;
  bool solved = false;
  std::int64_t entanglers = -1;
  Certificate certificate = Certificate::inconclusive;
  std::vector<LevelResult> levels;
  std::optional<CircuitConfig> winner;
  std::vector<double> winner_params;
  double winner_fidelity = 0.0;
  double wall_seconds = 0.0;
};

/// Runs every configuration at one entangler count (all of them in
/// exhaustive mode, `trials` uniform draws otherwise), stopping at the first
/// configuration that reaches the success threshold.
LevelResult search_level(const SynthesisProblem& problem, std::int64_t entanglers);

/// Local-only circuit first, then N = max(lower bound, 1), N + 1, ... until
/// a configuration succeeds or the cap is hit.
SynthesisReport find_min_gates(const SynthesisProblem& problem);

Json to_json(const LevelResult& level);

/// Outputs without timing, so two runs can be compared for equality.
Json to_json(const SynthesisReport& report);

}  // namespace qcx
