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

#include "qcx/circuits.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace qcx {

CircuitConfig::CircuitConfig(SystemDescriptor system, std::vector<QuditPair> pairs)
    : system_(system), pairs_(std::move(pairs)) {
  const int n = system_.qudits();
  for (const auto& [a, b] : pairs_) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw std::out_of_range(fmt::format("entangler pair ({}, {}) out of range for {} qudits", a, b, n));
    }
    if (a >= b) throw std::invalid_argument(fmt::format("entangler pair ({}, {}) must have a < b", a, b));
  }
}

Matrix cz_gate(int d) {
  if (d < 2) throw std::invalid_argument(fmt::format("CZ gate needs d >= 2, got {}", d));
  Matrix g = Matrix::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      // Reduce k*l mod d first so the phase is exact on the unit circle.
      const double angle = 2.0 * std::numbers::pi * ((k * l) % d) / d;
      g(k * d + l, k * d + l) = std::polar(1.0, angle);
    }
  }
  return g;
}

std::size_t slot_length(int d, GateMode mode) {
  const auto dd = static_cast<std::size_t>(d);
  return mode == GateMode::full ? dd * dd - 1 : dd * dd - dd;
}

const GeneratorBasis& shared_gellmann_basis(int d) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GeneratorBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[d];
  if (!slot) slot = std::make_unique<GeneratorBasis>(gellmann_basis(d));
  return *slot;
}

Matrix single_qudit_generator(std::span<const double> params, int d, GateMode mode) {
  const std::size_t len = slot_length(d, mode);
  if (params.size() != len) {
    throw std::invalid_argument(fmt::format("single-qudit gate expects {} parameters, got {}", len, params.size()));
  }
  const GeneratorBasis& basis = shared_gellmann_basis(d);
  Matrix a = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < len; ++k) a += params[k] * basis.generators[k];
  return a;
}

Matrix single_qudit_gate(std::span<const double> params, int d, GateMode mode) {
  return expi_hermitian(single_qudit_generator(params, d, mode), 1.0);
}

ParamLayout make_layout(const CircuitConfig& config, Task task) {
  const int n = config.system().qudits();
  const int d = config.system().levels();
  ParamLayout layout;
  layout.task = task;
  const GateMode initial = task == Task::state_prep ? GateMode::reduced : GateMode::full;
  auto push = [&](int qudit, GateMode mode) {
    const std::size_t len = slot_length(d, mode);
    layout.slots.push_back({qudit, mode, layout.total, len});
    layout.total += len;
  };
  for (int q = 0; q < n; ++q) push(q, initial);
  for (const auto& [a, b] : config.pairs()) {
    push(a, GateMode::reduced);
    push(b, GateMode::reduced);
  }
  return layout;
}

namespace {

void check_params(const ParamLayout& layout, std::span<const double> params) {
  if (params.size() != layout.total) {
    throw std::invalid_argument(fmt::format("circuit expects {} parameters, got {}", layout.total, params.size()));
  }
}

Matrix slot_gate(const GateSlot& slot, int d, std::span<const double> params) {
  return single_qudit_gate(params.subspan(slot.offset, slot.length), d, slot.mode);
}

}  // namespace

Matrix build_circuit_unitary(const CircuitConfig& config, const ParamLayout& layout,
                             std::span<const double> params) {
  check_params(layout, params);
  const SystemDescriptor& sys = config.system();
  const int n = sys.qudits();
  const int d = sys.levels();
  const Matrix cz = cz_gate(d);
  Matrix u = Matrix::Identity(sys.rows(), sys.rows());
  for (int q = 0; q < n; ++q) {
    const GateSlot& slot = layout.slots[static_cast<std::size_t>(q)];
    apply_local_left(u, slot_gate(slot, d, params), slot.qudit, sys.layout());
  }
  for (std::size_t k = 0; k < config.entanglers(); ++k) {
    u = embed_two_qudit(cz, config.pairs()[k], sys).matrix() * u;
    for (std::size_t s = 0; s < 2; ++s) {
      const GateSlot& slot = layout.slots[static_cast<std::size_t>(n) + 2 * k + s];
      apply_local_left(u, slot_gate(slot, d, params), slot.qudit, sys.layout());
    }
  }
  return u;
}

Vector build_circuit_state(const CircuitConfig& config, const ParamLayout& layout,
                           std::span<const double> params) {
  check_params(layout, params);
  const SystemDescriptor& sys = config.system();
  const int n = sys.qudits();
  const int d = sys.levels();
  const Matrix cz = cz_gate(d);
  Vector v = Vector::Zero(sys.rows());
  v(0) = 1.0;
  for (int q = 0; q < n; ++q) {
    const GateSlot& slot = layout.slots[static_cast<std::size_t>(q)];
    apply_local(v, slot_gate(slot, d, params), slot.qudit, sys.layout());
  }
  for (std::size_t k = 0; k < config.entanglers(); ++k) {
    v = embed_two_qudit(cz, config.pairs()[k], sys).matrix() * v;
    for (std::size_t s = 0; s < 2; ++s) {
      const GateSlot& slot = layout.slots[static_cast<std::size_t>(n) + 2 * k + s];
      apply_local(v, slot_gate(slot, d, params), slot.qudit, sys.layout());
    }
  }
  return v;
}

Target build_circuit(const CircuitConfig& config, const ParamLayout& layout,
                     std::span<const double> params) {
  if (layout.task == Task::state_prep) {
    return StateVector::normalized(config.system(), build_circuit_state(config, layout, params));
  }
  return UnitaryMatrix(config.system(), build_circuit_unitary(config, layout, params));
}

std::vector<QuditPair> qudit_pairs(int n) {
  std::vector<QuditPair> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) out.emplace_back(a, b);
  }
  return out;
}

ConfigSpace::ConfigSpace(SystemDescriptor system, std::size_t entanglers)
    : system_(system), entanglers_(entanglers), pairs_(qudit_pairs(system.qudits())) {
  if (system.qudits() < 2 && entanglers > 0) {
    throw std::invalid_argument("entanglers need at least two qudits");
  }
  for (std::size_t k = 0; k < entanglers_; ++k) {
    if (size_ > UINT64_MAX / pairs_.size()) throw std::overflow_error("configuration count overflows");
    size_ *= pairs_.size();
  }
}

CircuitConfig ConfigSpace::at(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("configuration index out of range");
  std::vector<QuditPair> chosen(entanglers_);
  for (std::size_t k = entanglers_; k-- > 0;) {
    chosen[k] = pairs_[index % pairs_.size()];
    index /= pairs_.size();
  }
  return CircuitConfig(system_, std::move(chosen));
}

CircuitConfig ConfigSpace::sample(Rng& rng) const {
  std::vector<QuditPair> chosen(entanglers_);
  for (auto& p : chosen) p = pairs_[rng.below(pairs_.size())];
  return CircuitConfig(system_, std::move(chosen));
}

ConfigSpace enumerate_configs(SystemDescriptor system, std::size_t entanglers) {
  return ConfigSpace(system, entanglers);
}

Json circuit_to_json(const CircuitConfig& config, Task task, std::span<const double> params) {
  Json pairs = Json::array();
  for (const auto& [a, b] : config.pairs()) pairs.push_back(Json::array({a, b}));
  return Json{{"system", to_json(config.system())},
              {"pairs", pairs},
              {"task", std::string(to_string(task))},
              {"params", std::vector<double>(params.begin(), params.end())}};
}

SerializedCircuit circuit_from_json(const Json& j) {
  std::vector<QuditPair> pairs;
  for (const auto& p : j.at("pairs")) pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  CircuitConfig config(system_from_json(j.at("system")), std::move(pairs));
  const Task task = task_from_string(j.at("task").get<std::string>());
  auto params = j.at("params").get<std::vector<double>>();
  const ParamLayout layout = make_layout(config, task);
  if (params.size() != layout.total) throw std::invalid_argument("serialized circuit has wrong parameter count");
  return {std::move(config), task, std::move(params)};
}

}  // namespace qcx
