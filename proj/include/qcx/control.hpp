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
#include <string>
#include <string_view>
#include <vector>

#include "qcx/qcore.hpp"
#include "qcx/serialize.hpp"
#include "qcx/targets.hpp"

namespace qcx {

/// lab: full Hamiltonian. rotating: qudit frequencies removed, full
/// (a + a^dag)(a + a^dag) coupling kept. rwa: frequencies removed and only the
/// exchange terms a^dag a + a a^dag of the coupling kept.
enum class Frame { lab, rotating, rwa };
enum class ChannelPolicy { one_step, all_pairs };
/// both: every level pair is driven by an X-type and a Y-type operator.
enum class Quadratures { both, x_only };

std::string_view to_string(Frame f);
std::string_view to_string(ChannelPolicy p);
std::string_view to_string(Quadratures q);
Frame frame_from_string(std::string_view s);
ChannelPolicy channel_policy_from_string(std::string_view s);
Quadratures quadratures_from_string(std::string_view s);

/// Drive of the (lower, upper) level pair of one qudit:
/// |l><u| + |u><l|, or -i|l><u| + i|u><l| when `y` is set.
struct ControlChannel {
  int qudit = 0;
  int lower = 0;
  int upper = 1;
  bool y = false;

  std::string label() const;
  bool operator==(const ControlChannel&) const = default;
};

std::vector<ControlChannel> make_channels(const SystemDescriptor& system, ChannelPolicy policy,
                                          Quadratures quadratures);

struct HamiltonianModel {
  SystemDescriptor system{2, 2};
  std::vector<double> omegas;
  std::vector<double> etas;
  double g = 0.0;
  Frame frame = Frame::rotating;
  ChannelPolicy policy = ChannelPolicy::one_step;
  Quadratures quadratures = Quadratures::both;
  std::vector<ControlChannel> channels;
  /// |f_j(t)| <= amplitude_bound when set.
  std::optional<double> amplitude_bound;

  /// g = 0.02 * 2pi; eta = 0 for qubits and -0.05 * 2pi otherwise;
  /// omega_k = 2pi * (5 + 0.1 k); rotating frame, one-step channels.
  static HamiltonianModel defaults(const SystemDescriptor& system, double scale = 1.0);

  /// Throws std::invalid_argument on g <= 0, wrong vector lengths or bad channels.
  void validate() const;
};

Json to_json(const HamiltonianModel& model);
/// Missing keys fall back to HamiltonianModel::defaults for `system`.
HamiltonianModel model_from_json(const Json& j, const SystemDescriptor& system);

/// Ladder operator a with a|j> = sqrt(j)|j-1>.
Matrix annihilation(int d);

struct ControlSystem {
  SystemDescriptor system{2, 2};
  Matrix h0;
  std::vector<Matrix> controls;
};

ControlSystem build_hamiltonian(const HamiltonianModel& model);

/// Minimum two-qubit CZ time pi / (4 g).
double t_cz2(double g);

struct PulseSchedule {
  double duration = 1.0;
  /// slices x channels.
  Eigen::MatrixXd amplitudes;
  std::optional<double> amplitude_bound;

  int slices() const { return static_cast<int>(amplitudes.rows()); }
  int channels() const { return static_cast<int>(amplitudes.cols()); }
  double dt() const { return duration / static_cast<double>(amplitudes.rows()); }
  void validate() const;
};

Json to_json(const PulseSchedule& schedule);
PulseSchedule schedule_from_json(const Json& j);
/// Columns: slice, time (slice start), one column per channel.
std::string schedule_to_csv(const PulseSchedule& schedule, const std::vector<ControlChannel>& channels);

/// prod_s exp(-i (H0 + sum_j f_j[s] H_j) dt), slice 0 rightmost.
UnitaryMatrix propagate(const ControlSystem& cs, const PulseSchedule& schedule);

/// Fidelity of the schedule's evolution against a target (from |0...0> for
/// state targets) and its exact gradient with respect to the amplitudes.
class PulseObjective {
 public:
  PulseObjective(const ControlSystem& cs, Target target, double duration, int slices);

  int slices() const { return slices_; }
  int channels() const { return static_cast<int>(cs_.controls.size()); }
  std::size_t size() const { return static_cast<std::size_t>(slices_) * cs_.controls.size(); }

  /// Amplitudes are laid out slice-major: a[s * channels + j].
  double fidelity(std::span<const double> amplitudes) const;
  double fidelity_and_gradient(std::span<const double> amplitudes, std::span<double> grad) const;

 private:
  double evaluate(std::span<const double> amplitudes, std::span<double> grad) const;

  struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
  };

  ControlSystem cs_;
  Target target_;
  double duration_;
  int slices_;
  std::vector<std::vector<Entry>> sparse_controls_;
};

struct GrapeSettings {
  int restarts = 5;
  int max_iterations = 500;
  /// Runs stop once 1 - F falls below this.
  double stop_infidelity = 1e-6;
  /// Skip the remaining restarts once one reaches this fidelity.
  double success_fidelity = 0.999;
  bool stop_on_success = true;
  /// Random starts are uniform on +-init_scale * pi / T.
  double init_scale = 1.0;
  bool record_trace = false;
  int workers = 1;
};

struct GrapeResult {
  PulseSchedule schedule;
  double fidelity = 0.0;
  /// -1 for the supplied initial guess, otherwise the random restart index.
  int best_restart = -1;
  int restarts_run = 0;
  long iterations = 0;
  /// Fidelity after each accepted step of the winning run.
  std::vector<double> trace;
};

/// Multi-restart L-BFGS on 1 - F. Restart r starts from derive_seed(seed, r);
/// an `initial` schedule, when given, is tried first. Never throws on
/// non-convergence; the best value found is returned.
GrapeResult grape_optimize(const Target& target, const HamiltonianModel& model, double duration, int slices,
                           const GrapeSettings& settings, std::uint64_t seed,
                           const std::optional<PulseSchedule>& initial = std::nullopt);

/// max(40, ceil(20 T / T_CZ2)).
int default_slices(double duration, double g);

/// Resample to a new slice count by fractional time; amplitudes are scaled by
/// old/new duration so that pulse areas are kept.
PulseSchedule resample(const PulseSchedule& schedule, double duration, int slices);

struct SweepSettings {
  /// Grid T_k = t_start * ratio^k in units of T_CZ2, up to t_max.
  double t_start = 0.1;
  double ratio = 1.10;
  double t_max = 20.0;
  double threshold = 0.999;
  /// 0 selects default_slices per time.
  int slices = 0;
  bool warm_start = true;
  GrapeSettings grape;
};

struct MinTimePoint {
  double time_tcz2 = 0.0;
  int slices = 0;
  double fidelity = 0.0;
};

struct MinTimeResult {
  bool reached = false;
  /// Smallest grid time whose fidelity is >= threshold, in units of T_CZ2.
  double t_min_tcz2 = 0.0;
  double t_cz2 = 0.0;
  double spacing = 0.10;
  double threshold = 0.999;
  std::vector<MinTimePoint> trace;
  std::optional<PulseSchedule> best_schedule;
};

MinTimeResult min_time_sweep(const Target& target, const HamiltonianModel& model, const SweepSettings& settings,
                             std::uint64_t seed);

Json to_json(const MinTimeResult& result);

/// Orthonormal (Hilbert-Schmidt) bases of the nested-commutator layers of a
/// set of Hermitian generators: layer 1 spans their traceless parts, layer
/// k + 1 spans i[G, B] for generators G and layer-k elements B, minus every
/// earlier direction. Stops when a layer adds nothing or the span is full.
std::vector<std::vector<Matrix>> commutator_layers(const std::vector<Matrix>& generators, double tolerance = 1e-9);

/// Dimension of the Lie algebra generated by {iH0, iH_j}, traceless part.
int controllability_rank(const Matrix& h0, const std::vector<Matrix>& controls, double tolerance = 1e-9);

}  // namespace qcx
