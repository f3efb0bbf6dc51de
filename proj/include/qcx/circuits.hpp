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

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "qcx/bounds.hpp"
#include "qcx/qcore.hpp"
#include "qcx/rng.hpp"
#include "qcx/serialize.hpp"
#include "qcx/targets.hpp"

namespace qcx {

/// Placement of N CZ entanglers: an ordered list of qudit pairs (a, b), a < b.
class CircuitConfig {
 public:
  CircuitConfig(SystemDescriptor system, std::vector<QuditPair> pairs);

  const SystemDescriptor& system() const { return system_; }
  const std::vector<QuditPair>& pairs() const { return pairs_; }
  std::size_t entanglers() const { return pairs_.size(); }

  bool operator==(const CircuitConfig& other) const {
    return system_ == other.system_ && pairs_ == other.pairs_;
  }

 private:
  SystemDescriptor system_;
  std::vector<QuditPair> pairs_;
};

enum class GateMode { full, reduced };

struct GateSlot {
  int qudit = 0;
  GateMode mode = GateMode::full;
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// Slots 0..n-1 are the initial gates (one per qudit, in qudit order); slots
/// n+2k and n+2k+1 follow entangler k on its first and second qudit.
struct ParamLayout {
  Task task = Task::unitary_synth;
  std::vector<GateSlot> slots;
  std::size_t total = 0;
};

/// Diagonal two-qudit CZ with phase exp(i 2 pi k l / d) on |k, l>.
Matrix cz_gate(int d);

/// Number of generators used by a single-qudit gate slot.
std::size_t slot_length(int d, GateMode mode);

/// Gell-Mann basis of dimension d, built once per process.
const GeneratorBasis& shared_gellmann_basis(int d);

/// Hermitian exponent sum_a theta_a G_a (full: all d^2-1 generators,
/// reduced: the d^2-d off-diagonal ones).
Matrix single_qudit_generator(std::span<const double> params, int d, GateMode mode);
/// exp(i * single_qudit_generator(params, d, mode)).
Matrix single_qudit_gate(std::span<const double> params, int d, GateMode mode);

ParamLayout make_layout(const CircuitConfig& config, Task task);

/// Gates in time order: initial slots, then CZ + two slots per entangler.
/// Unitary output starts from the identity, state output from |0...0>.
Matrix build_circuit_unitary(const CircuitConfig& config, const ParamLayout& layout,
                             std::span<const double> params);
Vector build_circuit_state(const CircuitConfig& config, const ParamLayout& layout,
                           std::span<const double> params);
Target build_circuit(const CircuitConfig& config, const ParamLayout& layout,
                     std::span<const double> params);

/// All pairs (a, b) with a < b in lexicographic order.
std::vector<QuditPair> qudit_pairs(int n);

/// The [n(n-1)/2]^N entangler placements, indexed lexicographically with the
/// first entangler as the most significant position.
class ConfigSpace {
 public:
  ConfigSpace(SystemDescriptor system, std::size_t entanglers);

  std::uint64_t size() const { return size_; }
  CircuitConfig at(std::uint64_t index) const;
  /// Uniform draw over all placements.
  CircuitConfig sample(Rng& rng) const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = CircuitConfig;
    using difference_type = std::ptrdiff_t;

    iterator(const ConfigSpace* space, std::uint64_t index) : space_(space), index_(index) {}
    CircuitConfig operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }

   private:
    const ConfigSpace* space_;
    std::uint64_t index_;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  SystemDescriptor system_;
  std::size_t entanglers_;
  std::vector<QuditPair> pairs_;
  std::uint64_t size_ = 1;
};

ConfigSpace enumerate_configs(SystemDescriptor system, std::size_t entanglers);

Json circuit_to_json(const CircuitConfig& config, Task task, std::span<const double> params);
struct SerializedCircuit {
  CircuitConfig config;
  Task task;
  std::vector<double> params;
};
SerializedCircuit circuit_from_json(const Json& j);

}  // namespace qcx
