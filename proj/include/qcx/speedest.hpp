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
#include <vector>

#include "qcx/control.hpp"
#include "qcx/qcore.hpp"
#include "qcx/serialize.hpp"

namespace qcx {

/// exp(i eps G) U_base for a random traceless Hermitian G with ||G||_HS = 1.
UnitaryMatrix deform_unitary(const UnitaryMatrix& base, double epsilon, std::uint64_t seed);

/// exp(i Hb tau) exp(i Ha tau) exp(-i Hb tau) exp(-i Ha tau), which equals
/// exp([Ha, Hb] tau^2) up to O(tau^3).
Matrix bch_commutator_sequence(const Matrix& ha, const Matrix& hb, double tau);

struct GeneratorLog {
  /// Hermitian traceless X with exp(i X) = exp(i phase) U.
  Matrix generator;
  /// Global phase folded into U: branch-cut shift plus the removed trace.
  double phase = 0.0;
};

/// Principal logarithm of a unitary. If an eigenphase lies within 1e-6 of
/// the branch cut the matrix is rotated by a global phase first.
GeneratorLog unitary_generator(const UnitaryMatrix& u);

struct HierarchyLayer {
  int depth = 1;
  std::vector<Matrix> basis;
  /// HS norm of the projection of the generator onto this layer.
  double norm = 0.0;
};

struct HierarchyDecomposition {
  Matrix generator;
  double generator_norm = 0.0;
  double phase = 0.0;
  std::vector<HierarchyLayer> layers;
  double residual = 0.0;
  /// Number of layers needed before the span is complete or stops growing.
  int depth() const { return static_cast<int>(layers.size()); }
  std::size_t span() const;
};

/// Projects the principal-log generator of `target` onto the nested
/// commutator layers of {H0, H_j}.
HierarchyDecomposition hierarchy_decompose(const UnitaryMatrix& target, const Matrix& h0,
                                           const std::vector<Matrix>& controls);

/// Heuristic synthesis-time scale sum_k ||layer k||^(1/k) / hbar.
double time_estimate(const HierarchyDecomposition& decomposition, double hbar);
double time_estimate(const std::vector<double>& layer_norms, double hbar);

/// HS norm of H0 + sum_j H_j.
double default_hbar(const ControlSystem& cs);

struct KBounds {
  std::int64_t low = 1;
  std::int64_t high = 1;
};

/// Bounds on the commutator depth K needed to span all d^(2n) - 1 directions
/// with M control terms: ceil(log_{M+1}(2(d^(2n) - 1) / M) + 1) and d^(2n) - M - 1.
KBounds k_bounds(int n, int d, int m);

Json to_json(const HierarchyDecomposition& decomposition);

}  // namespace qcx
