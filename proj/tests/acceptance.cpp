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

// One PASS/FAIL line per acceptance criterion; details are indented above
// each verdict. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qcx/bounds.hpp"
#include "qcx/circuits.hpp"
#include "qcx/control.hpp"
#include "qcx/harness.hpp"
#include "qcx/speedest.hpp"
#include "qcx/synth.hpp"
#include "test_util.hpp"

namespace {

using namespace qcx;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string summary;
};

void detail(const std::string& line) { std::cout << "    " << line << std::endl; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Verdict bounds_table() {
  struct Row {
    int n, d;
    std::int64_t state, unitary;
  };
  const std::vector<Row> table{{2, 2, 1, 3},  {3, 2, 2, 14},  {4, 2, 6, 61},    {2, 3, 1, 6},    {3, 3, 3, 59},
                               {4, 3, 12, 544}, {2, 4, 1, 10}, {3, 4, 4, 169}, {4, 4, 20, 2729}};
  const auto t0 = Clock::now();
  int matched = 0;
  for (const Row& r : table) {
    matched += lower_bound({r.n, r.d, Task::state_prep, Entangler::cz}) == r.state;
    matched += lower_bound({r.n, r.d, Task::unitary_synth, Entangler::cz}) == r.unitary;
  }
  const double t = seconds_since(t0);
  return {matched == 18 && t < 1.0, fmt::format("{}/18 lower bounds exact in {:.2e} s", matched, t)};
}

struct SynthCell {
  int n, d;
  TargetKind kind;
  std::int64_t expected;
};

// N_min must match, with F >= 1 - 1e-9 at N_min and best F <= 1 - 1e-4 at N_min - 1.
bool check_synth_cell(const SynthCell& cell, std::uint64_t seed) {
  const auto t0 = Clock::now();
  SynthesisProblem problem(random_target({SystemDescriptor(cell.n, cell.d), cell.kind, seed, 1000}));
  problem.seed = seed;
  const SynthesisReport report = find_min_gates(problem);
  double gap = 0.0;
  if (report.solved && report.entanglers >= 1) gap = search_level(problem, report.entanglers - 1).best_fidelity;
  const bool ok = report.solved && report.entanglers == cell.expected && report.winner_fidelity >= 1.0 - 1e-9 &&
                  gap <= 1.0 - 1e-4;
  detail(fmt::format("n={} d={} {:<7} seed {}: N_min={} (want {}), F={:.12f}, gap F(N-1)={:.6f}, {:.1f} s -> {}",
                     cell.n, cell.d, to_string(cell.kind), seed, report.entanglers, cell.expected,
                     report.winner_fidelity, gap, seconds_since(t0), ok ? "ok" : "FAIL"));
  return ok;
}

Verdict synth_cells(const std::vector<SynthCell>& cells) {
  int ok = 0, total = 0;
  for (const SynthCell& c : cells) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed, ++total) ok += check_synth_cell(c, seed);
  }
  return {ok == total, fmt::format("{}/{} (cell, seed) runs meet the count and fidelity-gap conditions", ok, total)};
}

Verdict grape_cz() {
  const SystemDescriptor sys(2, 2);
  const HamiltonianModel model = HamiltonianModel::defaults(sys);
  const Target cz = UnitaryMatrix(sys, cz_gate(2));
  const double t = t_cz2(model.g);
  const double f10 = grape_optimize(cz, model, t, default_slices(t, model.g), {}, 1).fidelity;
  const double f07 = grape_optimize(cz, model, 0.7 * t, default_slices(0.7 * t, model.g), {}, 1).fidelity;
  const MinTimeResult sweep = min_time_sweep(cz, model, SweepSettings{}, 1);
  detail(fmt::format("F(1.0 T_CZ2) = {:.6f}, F(0.7 T_CZ2) = {:.6f}", f10, f07));
  detail(fmt::format("sweep T_min = {} T_CZ2 over {} grid points", sweep.reached ? fmt::format("{:.4f}", sweep.t_min_tcz2) : "none",
                     sweep.trace.size()));
  const bool ok = f10 >= 0.999 && f07 < 0.999 && sweep.reached && sweep.t_min_tcz2 >= 0.9 && sweep.t_min_tcz2 <= 1.1;
  return {ok, fmt::format("CZ: F(1.0)={:.5f}, F(0.7)={:.5f}, T_min={:.3f} T_CZ2", f10, f07, sweep.t_min_tcz2)};
}

std::vector<double> min_times(int n, int d, TargetKind kind, bool& all_reached) {
  const SystemDescriptor sys(n, d);
  const HamiltonianModel model = HamiltonianModel::defaults(sys);
  std::vector<double> out;
  all_reached = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t0 = Clock::now();
    const Target target = random_target({sys, kind, seed, 1000});
    const MinTimeResult r = min_time_sweep(target, model, SweepSettings{}, 1);
    all_reached = all_reached && r.reached;
    out.push_back(r.reached ? r.t_min_tcz2 : INFINITY);
    detail(fmt::format("n={} d={} {:<7} target seed {}: T_min = {:.3f} T_CZ2 ({:.0f} s)", n, d, to_string(kind), seed,
                       out.back(), seconds_since(t0)));
  }
  return out;
}

Verdict table_two_n2d2() {
  bool reached_u = false, reached_s = false, reached_s3 = false;
  const std::vector<double> u = min_times(2, 2, TargetKind::unitary, reached_u);
  const std::vector<double> s = min_times(2, 2, TargetKind::state, reached_s);
  // One grid step of slack on either end of the range check.
  auto within = [](const std::vector<double>& v, double lo, double hi, int& count) {
    count = 0;
    for (double x : v) count += x >= lo - 1e-9 && x <= hi + 1e-9;
    return count == static_cast<int>(v.size());
  };
  int cu = 0, cs = 0;
  const bool ok_u = reached_u && within(u, 1.0, 1.8, cu);
  const bool ok_s = reached_s && within(s, 0.4, 1.0, cs);
  double mean_s = 0.0;
  for (double x : s) mean_s += x / 5.0;
  const std::vector<double> s3 = min_times(2, 3, TargetKind::state, reached_s3);
  double mean_s3 = 0.0;
  for (double x : s3) mean_s3 += x / 5.0;
  const bool ok_d3 = reached_s3 && mean_s3 < mean_s;
  detail(fmt::format("unitary in [1.0, 1.8]: {}/5; state in [0.4, 1.0]: {}/5", cu, cs));
  detail(fmt::format("qualitative: mean state T_min d=3 {:.3f} vs d=2 {:.3f} -> {}", mean_s3, mean_s,
                     ok_d3 ? "decreases" : "does not decrease"));
  return {ok_u && ok_s && ok_d3,
          fmt::format("unitary {}/5 and state {}/5 in range; d=3 state mean {} d=2 mean", cu, cs,
                      ok_d3 ? "below" : "not below")};
}

Verdict grape_gradients() {
  Rng rng(2024);
  double worst = 0.0;
  int instances = 0;
  for (int d : {2, 3}) {
    for (int rep = 0; rep < 5; ++rep, ++instances) {
      const SystemDescriptor sys(2, d);
      const HamiltonianModel model = HamiltonianModel::defaults(sys);
      const TargetKind kind = rep % 2 == 0 ? TargetKind::unitary : TargetKind::state;
      const Target target = random_target({sys, kind, static_cast<std::uint64_t>(1 + instances), 1000});
      const double duration = t_cz2(model.g) * rng.uniform(0.5, 2.0);
      const PulseObjective obj(build_hamiltonian(model), target, duration, 20);
      std::vector<double> a = testing_util::random_params(rng, obj.size(), std::numbers::pi / duration);
      std::vector<double> grad(obj.size());
      obj.fidelity_and_gradient(a, grad);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i];
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        a[i] = x + h;
        const double up = obj.fidelity(a);
        a[i] = x - h;
        const double down = obj.fidelity(a);
        a[i] = x;
        const double fd = (up - down) / (2.0 * h);
        num += (grad[i] - fd) * (grad[i] - fd);
        den += fd * fd;
      }
      const double rel = std::sqrt(num / den);
      worst = std::max(worst, rel);
      detail(fmt::format("d={} {:<7} T={:.2f}: relative error {:.2e}", d, to_string(kind), duration, rel));
    }
  }
  return {worst <= 1e-6, fmt::format("{} instances, worst relative error {:.2e}", instances, worst)};
}

Verdict controllability() {
  const ControlSystem cs = build_hamiltonian(HamiltonianModel::defaults(SystemDescriptor(2, 2)));
  std::vector<Matrix> all = cs.controls;
  all.push_back(cs.h0);
  const int coupled = controllability_rank(cs.h0, cs.controls);
  const int coupled_oracle = testing_util::brute_force_lie_rank(all);
  // g = 0 in the rotating frame with eta = 0 leaves no drift at all.
  const Matrix zero = Matrix::Zero(4, 4);
  const int decoupled = controllability_rank(zero, cs.controls);
  const int decoupled_oracle = testing_util::brute_force_lie_rank(cs.controls);
  detail(fmt::format("default model: rank {} (oracle {}); g = 0: rank {} (oracle {})", coupled, coupled_oracle,
                     decoupled, decoupled_oracle));
  return {coupled == 15 && coupled_oracle == 15 && decoupled == 6 && decoupled_oracle == 6,
          fmt::format("ranks {} and {}, oracle {} and {}", coupled, decoupled, coupled_oracle, decoupled_oracle)};
}

struct Moment {
  double mean = 0.0;
  double se = 0.0;
};

Moment moment(const std::vector<double>& x) {
  double s = 0.0, s2 = 0.0;
  for (double v : x) {
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(x.size());
  return {s / n, std::sqrt((s2 / n - (s / n) * (s / n)) / n)};
}

Verdict haar() {
  const SystemDescriptor sys(2, 2);
  const double dim = 4.0;
  std::vector<double> state, unitary;
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
    state.push_back(std::norm(random_state({sys, TargetKind::state, seed, 1000}).amplitudes()(0)));
    unitary.push_back(std::norm(random_unitary({sys, TargetKind::unitary, seed, 1000}).matrix()(2, 1)));
  }
  const Moment ms = moment(state);
  const Moment mu = moment(unitary);
  const double zs = (ms.mean - 1.0 / dim) / ms.se;
  const double zu = (mu.mean - 1.0 / dim) / mu.se;
  detail(fmt::format("state |psi_0|^2: mean {:.5f} (SE {:.5f}, z = {:+.2f})", ms.mean, ms.se, zs));
  detail(fmt::format("unitary |U_21|^2: mean {:.5f} (SE {:.5f}, z = {:+.2f})", mu.mean, mu.se, zu));
  return {std::abs(zs) < 3.0 && std::abs(zu) < 3.0, fmt::format("10000 samples each, z = {:+.2f} and {:+.2f}", zs, zu)};
}

Verdict bch_order() {
  Rng rng(9);
  const Matrix a = testing_util::random_hermitian(rng, 4);
  const Matrix b = testing_util::random_hermitian(rng, 4);
  std::vector<double> lx, ly;
  for (double tau : {0.1, 0.05, 0.025, 0.0125}) {
    const Matrix exact = expi_hermitian(-kI * commutator(a, b), tau * tau);
    const double err = (bch_commutator_sequence(a, b, tau) - exact).norm();
    lx.push_back(std::log(tau));
    ly.push_back(std::log(err));
    detail(fmt::format("tau = {:<7} error {:.3e}", tau, err));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    mx += lx[i] / 4.0;
    my += ly[i] / 4.0;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - 3.0) <= 0.2, fmt::format("log-log slope {:.3f}", slope)};
}

Verdict hierarchy() {
  const ControlSystem cs = build_hamiltonian(HamiltonianModel::defaults(SystemDescriptor(2, 2)));
  const KBounds kb = k_bounds(2, 2, static_cast<int>(cs.controls.size()));
  int depth = 0;
  double worst = 0.0;
  bool spans = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const UnitaryMatrix target = deform_unitary(UnitaryMatrix::identity(cs.system), 0.1, seed);
    const HierarchyDecomposition h = hierarchy_decompose(target, cs.h0, cs.controls);
    depth = std::max(depth, h.depth());
    spans = spans && h.span() == 15;
    worst = std::max(worst, h.residual / h.generator_norm);
  }
  const double x = 0.37;
  const bool homogeneous = time_estimate(std::vector<double>{x}, 2.0) == x / 2.0 &&
                           time_estimate(std::vector<double>{0.0, 4.0 * x}, 1.0) ==
                               2.0 * time_estimate(std::vector<double>{0.0, x}, 1.0) &&
                           time_estimate(std::vector<double>{x, 0.0}, 4.0) * 2.0 == time_estimate(std::vector<double>{x, 0.0}, 2.0);
  detail(fmt::format("M = {} controls: k_bounds = [{}, {}], measured depth {}", cs.controls.size(), kb.low, kb.high, depth));
  detail(fmt::format("worst residual / ||eps G|| = {:.2e}; homogeneity {}", worst, homogeneous ? "exact" : "violated"));
  return {spans && depth >= kb.low && depth <= kb.high && worst <= 1e-9 && homogeneous,
          fmt::format("depth {} in [{}, {}], residual ratio {:.1e}", depth, kb.low, kb.high, worst)};
}

Verdict reproducibility() {
  const std::filesystem::path root = std::filesystem::temp_directory_path() / "qcx-acceptance-replay";
  std::filesystem::remove_all(root);
  struct Run {
    std::string sub;
    Json user;
  };
  const std::vector<Run> runs{
      {"bounds", Json::object()},
      {"gen-target", Json{{"target", {{"d", 3}}}}},
      {"synth-search", Json{{"target", {{"kind", "unitary"}}}, {"verify_gap", true}}},
      {"synth-search", Json{{"target", {{"n", 3}, {"kind", "state"}}}, {"search", "probabilistic"}, {"trials", 5}}},
      {"grape", Json{{"target", {{"source", "cz"}}}}},
      {"min-time", Json{{"target", {{"kind", "state"}, {"seed", 2}}}}},
      {"speed-est", Json::object()},
      {"controllability", Json::object()},
  };
  int identical = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    ExecContext ctx;
    ctx.out_dir = root / fmt::format("{}-{}", i, runs[i].sub);
    const std::uint64_t seed = 1 + i;
    run_and_write(runs[i].sub, resolve_config(runs[i].sub, runs[i].user, seed), seed, ctx);
    const ReplayResult r = replay(load_record(ctx.out_dir / "record.json"));
    identical += r.identical;
    detail(fmt::format("{:<16} seed {}: {}", runs[i].sub, seed, r.identical ? "identical" : "DIFFERS"));
  }
  std::filesystem::remove_all(root);
  return {identical == static_cast<int>(runs.size()),
          fmt::format("{}/{} records replayed bit-identically", identical, runs.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"bounds table", bounds_table},
      {"exhaustive search, two qudits",
       [] {
         return synth_cells({{2, 2, TargetKind::state, 1},
                             {2, 2, TargetKind::unitary, 3},
                             {2, 3, TargetKind::state, 1},
                             {2, 3, TargetKind::unitary, 6},
                             {2, 4, TargetKind::state, 1},
                             {2, 4, TargetKind::unitary, 10}});
       }},
      {"exhaustive search, three qubits", [] { return synth_cells({{3, 2, TargetKind::state, 3}}); }},
      {"GRAPE CZ benchmark", grape_cz},
      {"minimum times, two qubits", table_two_n2d2},
      {"GRAPE gradient", grape_gradients},
      {"controllability", controllability},
      {"Haar statistics", haar},
      {"BCH order", bch_order},
      {"hierarchy estimator", hierarchy},
      {"reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, fmt::format("exception: {}", e.what())};
    }
    failures += !v.pass;
    std::cout << fmt::format("{} {:>2} {}: {} [{:.1f} s]", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                             v.summary, seconds_since(t0))
              << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failures, criteria.size()) << std::endl;
  return failures == 0 ? 0 : 1;
}
