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
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qcx/qcore.hpp"
#include "qcx/rng.hpp"
#include "qcx/serialize.hpp"

namespace qcx {

/// Generalized Gell-Mann matrices of su(m), Tr(G_i G_j) = 2 delta_ij.
///
/// Order: symmetric off-diagonal |j><k| + |k><j| for j < k, then the
/// antisymmetric -i|j><k| + i|k><j| for j < k, then the m - 1 diagonal ones.
/// For m = 2 this is (sigma_x, sigma_y, sigma_z).
struct GeneratorBasis {
  int dimension = 0;
  std::vector<Matrix> generators;

  std::size_t size() const { return generators.size(); }
  /// Number of off-diagonal generators; the diagonal family starts here.
  std::size_t off_diagonal_count() const {
    return static_cast<std::size_t>(dimension) * static_cast<std::size_t>(dimension - 1);
  }
};

GeneratorBasis gellmann_basis(int m);

enum class TargetKind { state, unitary };

std::string_view to_string(TargetKind kind);
TargetKind target_kind_from_string(std::string_view s);

struct RandomTargetSpec {
  SystemDescriptor system;
  TargetKind kind = TargetKind::unitary;
  std::uint64_t seed = 1;
  int randomization_steps = 1000;
};

using Target = std::variant<StateVector, UnitaryMatrix>;

TargetKind kind_of(const Target& target);
const SystemDescriptor& system_of(const Target& target);

/// Uniform [-1, 1] fill of real and imaginary parts, then column Gram-Schmidt.
Matrix raw_random_unitary(Rng& rng, Eigen::Index dim);

StateVector random_state(const RandomTargetSpec& spec);
UnitaryMatrix random_unitary(const RandomTargetSpec& spec);
Target random_target(const RandomTargetSpec& spec);

/// Left-multiplies by `steps` independently drawn raw random unitaries.
StateVector haar_randomize(const StateVector& target, int steps, std::uint64_t seed);
UnitaryMatrix haar_randomize(const UnitaryMatrix& target, int steps, std::uint64_t seed);

/// exp(i sum_j lambda_j G_j) over a basis of su(D).
UnitaryMatrix random_unitary_exp(std::span<const double> lambdas, const GeneratorBasis& basis,
                                 const SystemDescriptor& system);

Json to_json(const RandomTargetSpec& spec);
Json to_json(const Target& target);
Target target_from_json(const Json& j);

}  // namespace qcx
