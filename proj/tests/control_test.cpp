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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qcx/circuits.hpp"
#include "qcx/control.hpp"
#include "test_util.hpp"

namespace qcx {
namespace {

Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Matrix pauli_z() {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

PulseSchedule random_schedule(Rng& rng, double duration, int slices, int channels, double scale) {
  PulseSchedule s;
  s.duration = duration;
  s.amplitudes.resize(slices, channels);
  for (int i = 0; i < slices; ++i) {
    for (int j = 0; j < channels; ++j) s.amplitudes(i, j) = rng.uniform(-scale, scale);
  }
  return s;
}

TEST(Hamiltonian, QubitPairWithoutDetuningIsXXCoupling) {
  const SystemDescriptor sys(2, 2);
  HamiltonianModel model = HamiltonianModel::defaults(sys);
  model.frame = Frame::lab;
  model.omegas = {0.0, 0.0};
  const ControlSystem cs = build_hamiltonian(model);
  EXPECT_LT((cs.h0 - model.g * kron(pauli_x(), pauli_x())).norm(), 1e-15);
  EXPECT_EQ(cs.controls.size(), 4u);
}

TEST(Hamiltonian, RotatingFrameDropsFrequencies) {
  const SystemDescriptor sys(2, 3);
  HamiltonianModel rot = HamiltonianModel::defaults(sys);
  HamiltonianModel lab = rot;
  lab.frame = Frame::lab;
  const Matrix diff = build_hamiltonian(lab).h0 - build_hamiltonian(rot).h0;
  EXPECT_LT((diff - Matrix(diff.diagonal().asDiagonal())).norm(), 1e-15);
  // |1, 2> carries omega_0 + 2 omega_1
  EXPECT_NEAR(diff(5, 5).real(), rot.omegas[0] + 2.0 * rot.omegas[1], 1e-12);
}

TEST(Hamiltonian, LadderOperatorEntries) {
  const Matrix a = annihilation(3);
  EXPECT_NEAR(a(0, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(a(1, 2).real(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a(1, 0).real(), 0.0, 1e-15);
}

TEST(Hamiltonian, ControlsAreHermitianAndTraceless) {
  for (int d = 2; d <= 4; ++d) {
    for (ChannelPolicy p : {ChannelPolicy::one_step, ChannelPolicy::all_pairs}) {
      HamiltonianModel model = HamiltonianModel::defaults(SystemDescriptor(2, d));
      model.policy = p;
      model.channels = make_channels(model.system, p, model.quadratures);
      const ControlSystem cs = build_hamiltonian(model);
      const std::size_t pairs = p == ChannelPolicy::one_step ? d - 1 : d * (d - 1) / 2;
      EXPECT_EQ(cs.controls.size(), 2 * 2 * pairs);
      EXPECT_LT(hermiticity_deviation(cs.h0), 1e-15);
      for (const Matrix& c : cs.controls) {
        EXPECT_LT(hermiticity_deviation(c), 1e-15);
        EXPECT_NEAR(std::abs(c.trace()), 0.0, 1e-15);
      }
    }
  }
}

TEST(Hamiltonian, ValidationErrors) {
  HamiltonianModel model = HamiltonianModel::defaults(SystemDescriptor(2, 3));
  model.g = 0.0;
  EXPECT_THROW(model.validate(), std::invalid_argument);
  model = HamiltonianModel::defaults(SystemDescriptor(2, 3));
  model.etas.pop_back();
  EXPECT_THROW(model.validate(), std::invalid_argument);
  model = HamiltonianModel::defaults(SystemDescriptor(2, 3));
  model.channels.push_back({0, 1, 3, false});
  EXPECT_THROW(model.validate(), std::invalid_argument);
  EXPECT_EQ(model.channels.front().label(), "q0:01x");
}

TEST(Hamiltonian, JsonRoundTrip) {
  HamiltonianModel model = HamiltonianModel::defaults(SystemDescriptor(2, 3));
  model.amplitude_bound = 0.5;
  model.frame = Frame::rwa;
  const HamiltonianModel back = model_from_json(Json::parse(to_json(model).dump()), model.system);
  EXPECT_EQ(back.g, model.g);
  EXPECT_EQ(back.frame, Frame::rwa);
  EXPECT_EQ(back.channels, model.channels);
  EXPECT_EQ(back.amplitude_bound, model.amplitude_bound);
}

TEST(Propagate, ZeroPulsesZeroDriftIsIdentity) {
  ControlSystem cs;
  cs.system = SystemDescriptor(2, 2);
  cs.h0 = Matrix::Zero(4, 4);
  cs.controls = {embed_local(pauli_x(), 0, cs.system.layout())};
  PulseSchedule s;
  s.duration = 3.0;
  s.amplitudes = Eigen::MatrixXd::Zero(10, 1);
  EXPECT_LT((propagate(cs, s).matrix() - Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(Propagate, RabiHalfPeriodFlipsQubit) {
  ControlSystem cs;
  cs.system = SystemDescriptor(1, 2);
  cs.h0 = Matrix::Zero(2, 2);
  cs.controls = {pauli_x()};
  const double omega = 0.8;
  PulseSchedule s;
  s.duration = std::numbers::pi / (2.0 * omega);
  s.amplitudes = Eigen::MatrixXd::Constant(7, 1, omega);
  const UnitaryMatrix u = propagate(cs, s);
  EXPECT_NEAR(unitary_fidelity(u.matrix(), pauli_x()), 1.0, 1e-14);
  EXPECT_LT((u.matrix() + kI * pauli_x()).norm(), 1e-14);
}

TEST(Propagate, CouplingAloneAtCzTime) {
  HamiltonianModel model = HamiltonianModel::defaults(SystemDescriptor(2, 2));
  const ControlSystem cs = build_hamiltonian(model);
  PulseSchedule s;
  s.duration = t_cz2(model.g);
  s.amplitudes = Eigen::MatrixXd::Zero(5, 4);
  const Matrix xx = kron(pauli_x(), pauli_x());
  const Matrix expected = std::cos(std::numbers::pi / 4.0) * Matrix::Identity(4, 4) - kI * std::sin(std::numbers::pi / 4.0) * xx;
  EXPECT_LT((propagate(cs, s).matrix() - expected).norm(), 1e-13);
}

TEST(TimeUnit, CzTimeFromCoupling) {
  EXPECT_NEAR(t_cz2(0.02 * 2.0 * std::numbers::pi), 6.25, 1e-12);
  EXPECT_THROW(t_cz2(0.0), std::invalid_argument);
  EXPECT_EQ(default_slices(6.25, 0.02 * 2.0 * std::numbers::pi), 40);
  EXPECT_EQ(default_slices(6.25 * 3.0, 0.02 * 2.0 * std::numbers::pi), 60);
}

TEST(PulseObjective, GradientMatchesFiniteDifferences) {
  Rng rng(31);
  int instance = 0;
  for (int d : {2, 3}) {
    for (int rep = 0; rep < 5; ++rep, ++instance) {
      const SystemDescriptor sys(2, d);
      const HamiltonianModel model = HamiltonianModel::defaults(sys);
      const ControlSystem cs = build_hamiltonian(model);
      const TargetKind kind = rep % 2 == 0 ? TargetKind::unitary : TargetKind::state;
      const Target target = random_target({sys, kind, static_cast<std::uint64_t>(100 + instance), 100});
      const double duration = t_cz2(model.g) * rng.uniform(0.5, 1.5);
      const PulseObjective obj(cs, target, duration, 12);
      std::vector<double> a = testing_util::random_params(rng, obj.size(), std::numbers::pi / duration);
      std::vector<double> grad(obj.size());
      obj.fidelity_and_gradient(a, grad);
      const double h = 1e-6;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i];
        a[i] = x + h;
        const double up = obj.fidelity(a);
        a[i] = x - h;
        const double down = obj.fidelity(a);
        a[i] = x;
        const double fd = (up - down) / (2.0 * h);
        EXPECT_LE(std::abs(grad[i] - fd), 1e-6 * std::max(1.0, std::abs(fd))) << "instance " << instance;
      }
    }
  }
}

TEST(Grape, RealizableTarget) {
  Rng rng(12);
  const SystemDescriptor sys(2, 2);
  const HamiltonianModel model = HamiltonianModel::defaults(sys);
  const double duration = 1.5 * t_cz2(model.g);
  const PulseSchedule s = random_schedule(rng, duration, 40, 4, 0.3);
  const Target target = propagate(build_hamiltonian(model), s);
  GrapeSettings settings;
  settings.success_fidelity = 0.9999;
  const GrapeResult r = grape_optimize(target, model, duration, 40, settings, 1);
  EXPECT_GE(r.fidelity, 0.9999);
}

TEST(Grape, CzAtCzTimeAndBelow) {
  const SystemDescriptor sys(2, 2);
  const HamiltonianModel model = HamiltonianModel::defaults(sys);
  const Target cz = UnitaryMatrix(sys, cz_gate(2));
  const double t = t_cz2(model.g);
  EXPECT_GE(grape_optimize(cz, model, t, 40, {}, 1).fidelity, 0.999);
  EXPECT_LT(grape_optimize(cz, model, 0.7 * t, 40, {}, 1).fidelity, 0.999);
}

TEST(Grape, TraceIsMonotone) {
  const SystemDescriptor sys(2, 3);
  const HamiltonianModel model = HamiltonianModel::defaults(sys);
  const Target target = random_target({sys, TargetKind::state, 4, 100});
  GrapeSettings settings;
  settings.restarts = 1;
  settings.max_iterations = 200;
  settings.record_trace = true;
  const GrapeResult r = grape_optimize(target, model, t_cz2(model.g), 30, settings, 3);
  ASSERT_GT(r.trace.size(), 5u);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i], r.trace[i - 1] - 1e-14);
  EXPECT_NEAR(r.trace.back(), r.fidelity, 1e-12);
}

TEST(Grape, AmplitudeBoundIsRespected) {
  const SystemDescriptor sys(2, 2);
  HamiltonianModel model = HamiltonianModel::defaults(sys);
  model.amplitude_bound = 0.05;
  const Target target = random_target({sys, TargetKind::state, 2, 100});
  GrapeSettings settings;
  settings.restarts = 2;
  const GrapeResult r = grape_optimize(target, model, t_cz2(model.g), 40, settings, 1);
  EXPECT_LE(r.schedule.amplitudes.cwiseAbs().maxCoeff(), 0.05 + 1e-15);
}

TEST(Resample, KeepsPulseArea) {
  Rng rng(5);
  const PulseSchedule s = random_schedule(rng, 2.0, 10, 2, 1.0);
  const PulseSchedule r = resample(s, 4.0, 20);
  EXPECT_NEAR(r.amplitudes.col(0).sum() * r.dt(), s.amplitudes.col(0).sum() * s.dt(), 1e-12);
  EXPECT_EQ(r.slices(), 20);
}

TEST(Schedule, JsonAndCsv) {
  Rng rng(8);
  const PulseSchedule s = random_schedule(rng, 2.0, 3, 2, 1.0);
  const PulseSchedule back = schedule_from_json(Json::parse(to_json(s).dump()));
  EXPECT_EQ(back.amplitudes, s.amplitudes);
  const std::string csv = schedule_to_csv(s, {{0, 0, 1, false}, {0, 0, 1, true}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "slice,time,q0:01x,q0:01y");
  PulseSchedule bad = s;
  bad.amplitude_bound = 0.01;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(MinTime, IdentityTargetAtFirstGridPoint) {
  const SystemDescriptor sys(2, 2);
  const HamiltonianModel model = HamiltonianModel::defaults(sys);
  SweepSettings settings;
  settings.grape.restarts = 1;
  const MinTimeResult r = min_time_sweep(UnitaryMatrix::identity(sys), model, settings, 1);
  EXPECT_TRUE(r.reached);
  EXPECT_DOUBLE_EQ(r.t_min_tcz2, 0.1);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(MinTime, InvariantUnderCouplingScale) {
  const SystemDescriptor sys(2, 2);
  const Target target = random_target({sys, TargetKind::state, 1, 1000});
  SweepSettings settings;
  const MinTimeResult a = min_time_sweep(target, HamiltonianModel::defaults(sys, 1.0), settings, 1);
  const MinTimeResult b = min_time_sweep(target, HamiltonianModel::defaults(sys, 2.5), settings, 1);
  ASSERT_TRUE(a.reached && b.reached);
  EXPECT_NEAR(b.t_cz2 * 2.5, a.t_cz2, 1e-12);
  EXPECT_LE(std::abs(std::log(a.t_min_tcz2 / b.t_min_tcz2)), std::log(settings.ratio) + 1e-9);
}

TEST(MinTime, WarmStartTraceIsNonDecreasing) {
  const SystemDescriptor sys(2, 2);
  const Target target = random_target({sys, TargetKind::state, 2, 1000});
  const MinTimeResult r = min_time_sweep(target, HamiltonianModel::defaults(sys), SweepSettings{}, 1);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_GE(r.trace[i].fidelity, r.trace[i - 1].fidelity - 1e-3) << "at T = " << r.trace[i].time_tcz2;
    EXPECT_LE(r.trace[i].fidelity, 1.0 + 1e-12);
  }
}

TEST(Controllability, SingleQubitPauliAlgebra) {
  EXPECT_EQ(controllability_rank(pauli_z(), {pauli_x()}), 3);
}

TEST(Controllability, DecoupledQubitsSpanLocalAlgebra) {
  const SystemDescriptor sys(2, 2);
  ControlSystem cs = build_hamiltonian(HamiltonianModel::defaults(sys));
  cs.h0 = Matrix::Zero(4, 4);
  EXPECT_EQ(controllability_rank(cs.h0, cs.controls), 6);
  std::vector<Matrix> all = cs.controls;
  EXPECT_EQ(testing_util::brute_force_lie_rank(all), 6);
}

TEST(Controllability, DefaultModelIsFullyControllable) {
  const ControlSystem cs = build_hamiltonian(HamiltonianModel::defaults(SystemDescriptor(2, 2)));
  EXPECT_EQ(controllability_rank(cs.h0, cs.controls), 15);
  std::vector<Matrix> all = cs.controls;
  all.push_back(cs.h0);
  EXPECT_EQ(testing_util::brute_force_lie_rank(all), 15);
}

TEST(Controllability, QutritPairAgreesWithOracle) {
  const ControlSystem cs = build_hamiltonian(HamiltonianModel::defaults(SystemDescriptor(2, 3)));
  std::vector<Matrix> all = cs.controls;
  all.push_back(cs.h0);
  EXPECT_EQ(controllability_rank(cs.h0, cs.controls), testing_util::brute_force_lie_rank(all));
  EXPECT_EQ(controllability_rank(cs.h0, cs.controls), 80);
}

}  // namespace
}  // namespace qcx
