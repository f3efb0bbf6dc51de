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
#include <stdexcept>
#include <utility>

#include "qcx/linalg.hpp"

namespace qcx {

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 20;

/// A register of `qudits` systems with `levels` levels each; dim = levels^qudits.
///
/// Composite basis indices are big-endian: qudit 0 is the most significant digit.
class SystemDescriptor {
 public:
  SystemDescriptor(int qudits, int levels, std::size_t dimension_cap = kDefaultDimensionCap);

  int qudits() const { return layout_.qudits; }
  int levels() const { return layout_.levels; }
  std::size_t dim() const { return layout_.dim; }
  Eigen::Index rows() const { return static_cast<Eigen::Index>(layout_.dim); }
  const DigitLayout& layout() const { return layout_; }

  bool operator==(const SystemDescriptor& other) const {
    return qudits() == other.qudits() && levels() == other.levels();
  }

 private:
  DigitLayout layout_;
};

/// Normalized pure state of a register.
class StateVector {
 public:
  /// Throws if the norm deviates from 1 by more than kNormTolerance.
  StateVector(SystemDescriptor system, Vector amplitudes);
  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static StateVector normalized(SystemDescriptor system, Vector amplitudes);
  static StateVector basis(SystemDescriptor system, std::size_t index);

  const SystemDescriptor& system() const { return system_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  SystemDescriptor system_;
  Vector amplitudes_;
};

/// Unitary operator on a register; U^dagger U = I within kUnitaryTolerance.
class UnitaryMatrix {
 public:
  UnitaryMatrix(SystemDescriptor system, Matrix entries);
  static UnitaryMatrix identity(SystemDescriptor system);

  const SystemDescriptor& system() const { return system_; }
  const Matrix& matrix() const { return entries_; }

 private:
  SystemDescriptor system_;
  Matrix entries_;
};

using QuditPair = std::pair<int, int>;

/// Places a d^2 x d^2 gate on qudits (a, b) of the register. The gate's own
/// basis is |k, l> with k the digit of qudit a.
UnitaryMatrix embed_two_qudit(const Matrix& gate, QuditPair pair, const SystemDescriptor& system);

/// |<a|b>|^2
double state_fidelity(const StateVector& a, const StateVector& b);
/// |Tr(U^dagger V)|^2 / D^2
double unitary_fidelity(const UnitaryMatrix& u, const UnitaryMatrix& v);
double unitary_fidelity(const Matrix& u, const Matrix& v);

}  // namespace qcx
