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

#include "qcx/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "qcx/optimize.hpp"
#include "qcx/parallel.hpp"
#include "qcx/rng.hpp"

namespace qcx {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<E> values, std::string_view what) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument(fmt::format("unknown {} '{}'", what, s));
}

}  // namespace

std::string_view to_string(Frame f) {
  switch (f) {
    case Frame::lab:
      return "lab";
    case Frame::rotating:
      return "rotating";
    case Frame::rwa:
      break;
  }
  return "rwa";
}

std::string_view to_string(ChannelPolicy p) { return p == ChannelPolicy::one_step ? "one_step" : "all_pairs"; }
std::string_view to_string(Quadratures q) { return q == Quadratures::both ? "both" : "x_only"; }

Frame frame_from_string(std::string_view s) {
  return parse_enum(s, {Frame::lab, Frame::rotating, Frame::rwa}, "frame");
}
ChannelPolicy channel_policy_from_string(std::string_view s) {
  return parse_enum(s, {ChannelPolicy::one_step, ChannelPolicy::all_pairs}, "channel policy");
}
Quadratures quadratures_from_string(std::string_view s) {
  return parse_enum(s, {Quadratures::both, Quadratures::x_only}, "quadratures setting");
}

std::string ControlChannel::label() const { return fmt::format("q{}:{}{}{}", qudit, lower, upper, y ? 'y' : 'x'); }

std::vector<ControlChannel> make_channels(const SystemDescriptor& system, ChannelPolicy policy,
                                          Quadratures quadratures) {
  std::vector<ControlChannel> out;
  const int d = system.levels();
  for (int k = 0; k < system.qudits(); ++k) {
    for (int j = 0; j + 1 < d; ++j) {
      const int last = policy == ChannelPolicy::one_step ? j + 1 : d - 1;
      for (int l = j + 1; l <= last; ++l) {
        out.push_back({k, j, l, false});
        if (quadratures == Quadratures::both) out.push_back({k, j, l, true});
      }
    }
  }
  return out;
}

HamiltonianModel HamiltonianModel::defaults(const SystemDescriptor& system, double scale) {
  HamiltonianModel m;
  m.system = system;
  m.g = 0.02 * kTwoPi * scale;
  const double eta = system.levels() == 2 ? 0.0 : -0.05 * kTwoPi * scale;
  for (int k = 0; k < system.qudits(); ++k) {
    m.omegas.push_back(kTwoPi * (5.0 + 0.1 * k) * scale);
    m.etas.push_back(eta);
  }
  m.channels = make_channels(system, m.policy, m.quadratures);
  return m;
}

void HamiltonianModel::validate() const {
  const auto n = static_cast<std::size_t>(system.qudits());
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("coupling g must be positive and finite");
  if (omegas.size() != n || etas.size() != n) {
    throw std::invalid_argument(fmt::format("expected {} qudit frequencies and anharmonicities", n));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(omegas[k]) || !std::isfinite(etas[k])) {
      throw std::invalid_argument("qudit frequencies and anharmonicities must be finite");
    }
  }
  if (channels.empty()) throw std::invalid_argument("model has no control channels");
  for (const ControlChannel& c : channels) {
    if (c.qudit < 0 || c.qudit >= system.qudits() || c.lower < 0 || c.upper >= system.levels() ||
        c.lower >= c.upper) {
      throw std::invalid_argument(fmt::format("invalid control channel {}", c.label()));
    }
    if (policy == ChannelPolicy::one_step && c.upper != c.lower + 1) {
      throw std::invalid_argument(fmt::format("channel {} is not a one-step transition", c.label()));
    }
    if (quadratures == Quadratures::x_only && c.y) {
      throw std::invalid_argument(fmt::format("channel {} is a Y drive in an x_only model", c.label()));
    }
  }
  if (amplitude_bound && !(*amplitude_bound > 0.0)) throw std::invalid_argument("amplitude bound must be positive");
}

Json to_json(const HamiltonianModel& model) {
  Json channels = Json::array();
  for (const ControlChannel& c : model.channels) {
    channels.push_back({{"qudit", c.qudit}, {"lower", c.lower}, {"upper", c.upper}, {"quadrature", c.y ? "y" : "x"}});
  }
  return Json{{"omegas", model.omegas},
              {"etas", model.etas},
              {"g", model.g},
              {"frame", std::string(to_string(model.frame))},
              {"policy", std::string(to_string(model.policy))},
              {"quadratures", std::string(to_string(model.quadratures))},
              {"channels", channels},
              {"amplitude_bound", model.amplitude_bound ? Json(*model.amplitude_bound) : Json(nullptr)}};
}

HamiltonianModel model_from_json(const Json& j, const SystemDescriptor& system) {
  if (!j.is_object()) throw std::invalid_argument("model must be a JSON object");
  HamiltonianModel m = HamiltonianModel::defaults(system, j.value("scale", 1.0));
  if (j.contains("omegas")) m.omegas = j.at("omegas").get<std::vector<double>>();
  if (j.contains("etas")) m.etas = j.at("etas").get<std::vector<double>>();
  if (j.contains("g")) m.g = j.at("g").get<double>();
  if (j.contains("frame")) m.frame = frame_from_string(j.at("frame").get<std::string>());
  if (j.contains("policy")) m.policy = channel_policy_from_string(j.at("policy").get<std::string>());
  if (j.contains("quadratures")) m.quadratures = quadratures_from_string(j.at("quadratures").get<std::string>());
  if (j.contains("channels")) {
    m.channels.clear();
    for (const Json& c : j.at("channels")) {
      const std::string q = c.value("quadrature", "x");
      if (q != "x" && q != "y") throw std::invalid_argument(fmt::format("unknown quadrature '{}'", q));
      m.channels.push_back({c.at("qudit").get<int>(), c.at("lower").get<int>(), c.at("upper").get<int>(), q == "y"});
    }
  } else {
    m.channels = make_channels(system, m.policy, m.quadratures);
  }
  if (j.contains("amplitude_bound") && !j.at("amplitude_bound").is_null()) {
    m.amplitude_bound = j.at("amplitude_bound").get<double>();
  }
  m.validate();
  return m;
}

Matrix annihilation(int d) {
  Matrix a = Matrix::Zero(d, d);
  for (int j = 1; j < d; ++j) a(j - 1, j) = std::sqrt(static_cast<double>(j));
  return a;
}

ControlSystem build_hamiltonian(const HamiltonianModel& model) {
  model.validate();
  const SystemDescriptor& sys = model.system;
  const DigitLayout& lay = sys.layout();
  const int n = sys.qudits();
  const int d = sys.levels();
  const auto dim = static_cast<Eigen::Index>(sys.dim());

  ControlSystem cs;
  cs.system = sys;
  cs.h0 = Matrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    Matrix diag = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      const double omega = model.frame == Frame::lab ? model.omegas[static_cast<std::size_t>(k)] * j : 0.0;
      diag(j, j) = omega + model.etas[static_cast<std::size_t>(k)] * j * (j - 1) / 2.0;
    }
    cs.h0 += embed_local(diag, k, lay);
  }
  const Matrix a = annihilation(d);
  const Matrix x = a + a.adjoint();
  for (int k = 0; k < n; ++k) {
    for (int m = k + 1; m < n; ++m) {
      if (model.frame == Frame::rwa) {
        const Matrix hop = embed_local(a.adjoint(), k, lay) * embed_local(a, m, lay);
        cs.h0 += model.g * (hop + hop.adjoint());
      } else {
        cs.h0 += model.g * embed_local(x, k, lay) * embed_local(x, m, lay);
      }
    }
  }
  for (const ControlChannel& c : model.channels) {
    Matrix op = Matrix::Zero(d, d);
    if (c.y) {
      op(c.lower, c.upper) = -kI;
      op(c.upper, c.lower) = kI;
    } else {
      op(c.lower, c.upper) = 1.0;
      op(c.upper, c.lower) = 1.0;
    }
    cs.controls.push_back(embed_local(op, c.qudit, lay));
  }
  return cs;
}

double t_cz2(double g) {
  if (!(g > 0.0)) throw std::invalid_argument("coupling g must be positive");
  return std::numbers::pi / (4.0 * g);
}

void PulseSchedule::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("pulse duration must be positive");
  if (amplitudes.rows() < 1) throw std::invalid_argument("schedule needs at least one slice");
  if (!amplitudes.allFinite()) throw std::invalid_argument("non-finite pulse amplitude");
  if (amplitude_bound && amplitudes.cwiseAbs().maxCoeff() > *amplitude_bound * (1.0 + 1e-12)) {
    throw std::invalid_argument("pulse amplitude exceeds the bound");
  }
}

Json to_json(const PulseSchedule& schedule) {
  Json rows = Json::array();
  for (Eigen::Index s = 0; s < schedule.amplitudes.rows(); ++s) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < schedule.amplitudes.cols(); ++j) row.push_back(schedule.amplitudes(s, j));
    rows.push_back(std::move(row));
  }
  return Json{{"duration", schedule.duration},
              {"slices", schedule.slices()},
              {"amplitude_bound", schedule.amplitude_bound ? Json(*schedule.amplitude_bound) : Json(nullptr)},
              {"amplitudes", rows}};
}

PulseSchedule schedule_from_json(const Json& j) {
  PulseSchedule p;
  p.duration = j.at("duration").get<double>();
  const Json& rows = j.at("amplitudes");
  const auto slices = static_cast<Eigen::Index>(rows.size());
  const auto channels = slices > 0 ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
  p.amplitudes.resize(slices, channels);
  for (Eigen::Index s = 0; s < slices; ++s) {
    const Json& row = rows.at(static_cast<std::size_t>(s));
    if (static_cast<Eigen::Index>(row.size()) != channels) throw std::invalid_argument("ragged amplitude matrix");
    for (Eigen::Index c = 0; c < channels; ++c) p.amplitudes(s, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  if (j.contains("amplitude_bound") && !j.at("amplitude_bound").is_null()) {
    p.amplitude_bound = j.at("amplitude_bound").get<double>();
  }
  p.validate();
  return p;
}

std::string schedule_to_csv(const PulseSchedule& schedule, const std::vector<ControlChannel>& channels) {
  if (static_cast<int>(channels.size()) != schedule.channels()) {
    throw std::invalid_argument("channel list does not match the schedule");
  }
  std::string out = "slice,time";
  for (const ControlChannel& c : channels) out += "," + c.label();
  out += "\n";
  for (int s = 0; s < schedule.slices(); ++s) {
    out += fmt::format("{},{}", s, format_real(s * schedule.dt()));
    for (int j = 0; j < schedule.channels(); ++j) out += "," + format_real(schedule.amplitudes(s, j));
    out += "\n";
  }
  return out;
}

namespace {

Matrix slice_hamiltonian(const ControlSystem& cs, const double* amps) {
  Matrix h = cs.h0;
  for (std::size_t j = 0; j < cs.controls.size(); ++j) h += amps[j] * cs.controls[j];
  return h;
}

}  // namespace

UnitaryMatrix propagate(const ControlSystem& cs, const PulseSchedule& schedule) {
  schedule.validate();
  if (schedule.channels() != static_cast<int>(cs.controls.size())) {
    throw std::invalid_argument(
        fmt::format("schedule has {} channels, model has {}", schedule.channels(), cs.controls.size()));
  }
  const Eigen::MatrixXd rowmajor = schedule.amplitudes;
  Matrix u = Matrix::Identity(cs.h0.rows(), cs.h0.cols());
  std::vector<double> amps(static_cast<std::size_t>(schedule.channels()));
  for (int s = 0; s < schedule.slices(); ++s) {
    for (int j = 0; j < schedule.channels(); ++j) amps[static_cast<std::size_t>(j)] = rowmajor(s, j);
    u = expi_hermitian(slice_hamiltonian(cs, amps.data()), -schedule.dt()) * u;
  }
  return UnitaryMatrix(cs.system, std::move(u));
}

PulseObjective::PulseObjective(const ControlSystem& cs, Target target, double duration, int slices)
    : cs_(cs), target_(std::move(target)), duration_(duration), slices_(slices) {
  if (!(system_of(target_) == cs_.system)) throw std::invalid_argument("target and model act on different registers");
  if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  if (slices < 1) throw std::invalid_argument("slice count must be >= 1");
  for (const Matrix& c : cs_.controls) {
    std::vector<Entry> entries;
    for (Eigen::Index col = 0; col < c.cols(); ++col) {
      for (Eigen::Index row = 0; row < c.rows(); ++row) {
        if (c(row, col) != Complex(0.0)) entries.push_back({row, col, c(row, col)});
      }
    }
    sparse_controls_.push_back(std::move(entries));
  }
}

double PulseObjective::fidelity(std::span<const double> amplitudes) const { return evaluate(amplitudes, {}); }

double PulseObjective::fidelity_and_gradient(std::span<const double> amplitudes, std::span<double> grad) const {
  if (grad.size() != size()) throw std::invalid_argument("gradient buffer has wrong size");
  return evaluate(amplitudes, grad);
}

double PulseObjective::evaluate(std::span<const double> amplitudes, std::span<double> grad) const {
  if (amplitudes.size() != size()) throw std::invalid_argument("wrong amplitude count");
  const auto nc = static_cast<std::size_t>(channels());
  const auto ns = static_cast<std::size_t>(slices_);
  const double dt = duration_ / slices_;
  const bool want_grad = !grad.empty();

  std::vector<HermitianEigen> eigs(ns);
  std::vector<Matrix> steps(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    eigs[s] = hermitian_eigen(slice_hamiltonian(cs_, amplitudes.data() + s * nc));
    steps[s] = expi(eigs[s], -dt);
  }

  auto accumulate = [&](std::size_t s, const Matrix& m, Complex f, double scale) {
    const Matrix& w = eigs[s].vectors;
    const Matrix phi = expi_divided_differences(eigs[s], -dt);
    const Matrix r = (w.adjoint() * m * w).transpose().cwiseProduct(phi);
    const Matrix sm = w.conjugate() * r * w.transpose();
    for (std::size_t j = 0; j < nc; ++j) {
      Complex df = 0.0;
      for (const Entry& e : sparse_controls_[j]) df += e.value * sm(e.row, e.col);
      grad[s * nc + j] = scale * std::real(std::conj(f) * df);
    }
  };

  if (const auto* v = std::get_if<UnitaryMatrix>(&target_)) {
    const Matrix& target = v->matrix();
    std::vector<Matrix> before(want_grad ? ns : 0);
    Matrix x = Matrix::Identity(target.rows(), target.cols());
    for (std::size_t s = 0; s < ns; ++s) {
      if (want_grad) before[s] = x;
      x = steps[s] * x;
    }
    const Complex f = target.conjugate().cwiseProduct(x).sum();
    const double dim2 = static_cast<double>(target.rows()) * static_cast<double>(target.rows());
    if (want_grad) {
      Matrix back = target.adjoint();
      for (std::size_t s = ns; s-- > 0;) {
        accumulate(s, before[s] * back, f, 2.0 / dim2);
        back = back * steps[s];
      }
    }
    return std::norm(f) / dim2;
  }

  const Vector& target = std::get<StateVector>(target_).amplitudes();
  std::vector<Vector> before(want_grad ? ns : 0);
  Vector psi = Vector::Zero(target.size());
  psi(0) = 1.0;
  for (std::size_t s = 0; s < ns; ++s) {
    if (want_grad) before[s] = psi;
    psi = steps[s] * psi;
  }
  const Complex f = target.dot(psi);
  if (want_grad) {
    Vector chi = target.conjugate();
    for (std::size_t s = ns; s-- > 0;) {
      accumulate(s, before[s] * chi.transpose(), f, 2.0);
      chi = steps[s].transpose() * chi;
    }
  }
  return std::norm(f);
}

int default_slices(double duration, double g) {
  return std::max(40, static_cast<int>(std::ceil(20.0 * duration / t_cz2(g) - 1e-9)));
}

PulseSchedule resample(const PulseSchedule& schedule, double duration, int slices) {
  if (slices < 1 || !(duration > 0.0)) throw std::invalid_argument("invalid resample target");
  PulseSchedule out;
  out.duration = duration;
  out.amplitude_bound = schedule.amplitude_bound;
  out.amplitudes.resize(slices, schedule.channels());
  const double area_scale = schedule.duration / duration;
  for (int s = 0; s < slices; ++s) {
    const double frac = (s + 0.5) / slices;
    const int src = std::min(schedule.slices() - 1, static_cast<int>(frac * schedule.slices()));
    out.amplitudes.row(s) = schedule.amplitudes.row(src) * area_scale;
  }
  if (out.amplitude_bound) {
    out.amplitudes = out.amplitudes.cwiseMax(-*out.amplitude_bound).cwiseMin(*out.amplitude_bound);
  }
  return out;
}

namespace {

struct GrapeRun {
  std::vector<double> x;
  double fidelity = 0.0;
  long iterations = 0;
  std::vector<double> trace;
};

}  // namespace

GrapeResult grape_optimize(const Target& target, const HamiltonianModel& model, double duration, int slices,
                           const GrapeSettings& settings, std::uint64_t seed,
                           const std::optional<PulseSchedule>& initial) {
  if (settings.restarts < 0) throw std::invalid_argument("restarts must be >= 0");
  if (settings.restarts == 0 && !initial) throw std::invalid_argument("no restarts and no initial schedule");
  const ControlSystem cs = build_hamiltonian(model);
  const PulseObjective objective(cs, target, duration, slices);
  const std::size_t size = objective.size();
  const std::optional<double> bound = model.amplitude_bound;

  // With a bound, amplitudes are A sin(x) and the optimizer works on x.
  auto to_amplitudes = [&](std::span<const double> x) {
    std::vector<double> a(x.begin(), x.end());
    if (bound) {
      for (double& v : a) v = *bound * std::sin(v);
    }
    return a;
  };
  auto from_amplitude = [&](double a) { return bound ? std::asin(std::clamp(a / *bound, -1.0, 1.0)) : a; };

  const int offset = initial ? 1 : 0;
  const auto total = static_cast<std::size_t>(settings.restarts + offset);

  auto run = [&](std::size_t i) {
    std::vector<double> x0(size);
    if (initial && i == 0) {
      const PulseSchedule guess = initial->slices() == slices && initial->duration == duration
                                      ? *initial
                                      : resample(*initial, duration, slices);
      if (guess.channels() != objective.channels()) throw std::invalid_argument("initial schedule has wrong channels");
      for (int s = 0; s < slices; ++s) {
        for (int j = 0; j < objective.channels(); ++j) {
          x0[static_cast<std::size_t>(s * objective.channels() + j)] = from_amplitude(guess.amplitudes(s, j));
        }
      }
    } else {
      Rng rng(derive_seed(seed, i - static_cast<std::size_t>(offset)));
      double range = settings.init_scale * std::numbers::pi / duration;
      if (bound) range = std::min(range, *bound);
      for (double& v : x0) v = from_amplitude(rng.uniform(-range, range));
    }
    GradientObjective fn = [&](std::span<const double> x, std::span<double> g) {
      const std::vector<double> a = to_amplitudes(x);
      if (g.empty()) return 1.0 - objective.fidelity(a);
      const double fid = objective.fidelity_and_gradient(a, g);
      for (std::size_t k = 0; k < g.size(); ++k) {
        g[k] = -g[k];
        if (bound) g[k] *= *bound * std::cos(x[k]);
      }
      return 1.0 - fid;
    };
    MinimizerSettings ms;
    ms.direction = QuasiNewton::lbfgs;
    ms.max_iterations = settings.max_iterations;
    ms.target_cost = settings.stop_infidelity;
    ms.record_trace = settings.record_trace;
    MinimizerResult res = minimize(fn, std::move(x0), ms);
    GrapeRun out;
    out.fidelity = res.finite ? objective.fidelity(to_amplitudes(res.x)) : 0.0;
    out.iterations = res.iterations;
    for (double c : res.trace) out.trace.push_back(1.0 - c);
    out.x = std::move(res.x);
    return out;
  };
  auto stop = [&](const GrapeRun& r) { return settings.stop_on_success && r.fidelity >= settings.success_fidelity; };
  const auto runs = parallel_map_until<GrapeRun>(total, settings.workers, run, stop);

  std::size_t best = 0;
  GrapeResult result;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    result.iterations += runs[i].iterations;
    if (runs[i].fidelity > runs[best].fidelity) best = i;
  }
  result.fidelity = runs[best].fidelity;
  result.best_restart = static_cast<int>(best) - offset;
  result.restarts_run = static_cast<int>(runs.size());
  result.trace = runs[best].trace;
  result.schedule.duration = duration;
  result.schedule.amplitude_bound = bound;
  const std::vector<double> a = to_amplitudes(runs[best].x);
  result.schedule.amplitudes.resize(slices, objective.channels());
  for (int s = 0; s < slices; ++s) {
    for (int j = 0; j < objective.channels(); ++j) {
      result.schedule.amplitudes(s, j) = a[static_cast<std::size_t>(s * objective.channels() + j)];
    }
  }
  return result;
}

MinTimeResult min_time_sweep(const Target& target, const HamiltonianModel& model, const SweepSettings& settings,
                             std::uint64_t seed) {
  if (!(settings.t_start > 0.0) || !(settings.ratio > 1.0) || !(settings.t_max >= settings.t_start)) {
    throw std::invalid_argument("time grid needs t_start > 0, ratio > 1 and t_max >= t_start");
  }
  if (!(settings.threshold > 0.0 && settings.threshold <= 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1]");
  }
  MinTimeResult result;
  result.t_cz2 = t_cz2(model.g);
  result.spacing = settings.ratio - 1.0;
  result.threshold = settings.threshold;

  GrapeSettings grape = settings.grape;
  grape.success_fidelity = settings.threshold;
  std::optional<PulseSchedule> previous;
  for (std::size_t k = 0;; ++k) {
    const double t = settings.t_start * std::pow(settings.ratio, static_cast<double>(k));
    if (t > settings.t_max * (1.0 + 1e-12)) break;
    const double duration = t * result.t_cz2;
    const int slices = settings.slices > 0 ? settings.slices : default_slices(duration, model.g);
    std::optional<PulseSchedule> warm;
    if (settings.warm_start && previous) warm = resample(*previous, duration, slices);
    GrapeResult r = grape_optimize(target, model, duration, slices, grape, derive_seed(seed, k), warm);
    result.trace.push_back({t, slices, r.fidelity});
    previous = r.schedule;
    if (r.fidelity >= settings.threshold) {
      result.reached = true;
      result.t_min_tcz2 = t;
      result.best_schedule = std::move(r.schedule);
      break;
    }
  }
  return result;
}

Json to_json(const MinTimeResult& result) {
  Json trace = Json::array();
  for (const MinTimePoint& p : result.trace) {
    trace.push_back({{"time_tcz2", p.time_tcz2}, {"slices", p.slices}, {"fidelity", p.fidelity}});
  }
  Json j{{"reached", result.reached},
         {"t_min_tcz2", result.reached ? Json(result.t_min_tcz2) : Json(nullptr)},
         {"t_cz2", result.t_cz2},
         {"spacing", result.spacing},
         {"threshold", result.threshold},
         {"trace", trace}};
  if (result.best_schedule) j["schedule"] = to_json(*result.best_schedule);
  return j;
}

namespace {

// Projects c onto the complement of `basis` (two Gram-Schmidt passes) and
// appends the normalized remainder if it is not negligible.
bool extend_basis(std::vector<Matrix>& basis, Matrix c, double tolerance) {
  c = traceless_part(c);
  const double norm0 = hs_norm(c);
  if (!(norm0 > 0.0)) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Matrix& b : basis) c -= hs_inner(b, c).real() * b;
  }
  const double norm = hs_norm(c);
  if (norm <= tolerance * norm0) return false;
  basis.push_back(c / norm);
  return true;
}

}  // namespace

std::vector<std::vector<Matrix>> commutator_layers(const std::vector<Matrix>& generators, double tolerance) {
  std::vector<std::vector<Matrix>> layers;
  if (generators.empty()) return layers;
  const auto dim = static_cast<std::size_t>(generators.front().rows());
  const std::size_t full = dim * dim - 1;

  std::vector<Matrix> all;
  std::vector<Matrix> gens;
  for (const Matrix& g : generators) {
    const Matrix t = traceless_part(g);
    const double norm = hs_norm(t);
    if (norm > 0.0) gens.push_back(t / norm);
  }
  std::vector<std::size_t> starts{0};
  for (const Matrix& g : gens) extend_basis(all, g, tolerance);
  while (all.size() > starts.back() && all.size() < full) {
    const std::size_t begin = starts.back();
    const std::size_t end = all.size();
    starts.push_back(end);
    for (std::size_t i = begin; i < end && all.size() < full; ++i) {
      for (const Matrix& g : gens) {
        const Matrix c = kI * commutator(g, all[i]);
        extend_basis(all, c, tolerance);
        if (all.size() == full) break;
      }
    }
  }
  starts.push_back(all.size());
  for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
    if (starts[k + 1] > starts[k]) {
      layers.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(starts[k]),
                          all.begin() + static_cast<std::ptrdiff_t>(starts[k + 1]));
    }
  }
  return layers;
}

int controllability_rank(const Matrix& h0, const std::vector<Matrix>& controls, double tolerance) {
  std::vector<Matrix> gens{h0};
  gens.insert(gens.end(), controls.begin(), controls.end());
  std::size_t rank = 0;
  for (const auto& layer : commutator_layers(gens, tolerance)) rank += layer.size();
  return static_cast<int>(rank);
}

}  // namespace qcx
