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

#include "qcx/targets.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace qcx {

GeneratorBasis gellmann_basis(int m) {
  if (m < 2) throw std::invalid_argument(fmt::format("Gell-Mann basis needs m >= 2, got {}", m));
  GeneratorBasis basis;
  basis.dimension = m;
  basis.generators.reserve(static_cast<std::size_t>(m * m - 1));
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k) {
      Matrix g = Matrix::Zero(m, m);
      g(j, k) = 1.0;
      g(k, j) = 1.0;
      basis.generators.push_back(std::move(g));
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k) {
      Matrix g = Matrix::Zero(m, m);
      g(j, k) = -kI;
      g(k, j) = kI;
      basis.generators.push_back(std::move(g));
    }
  }
  for (int l = 1; l < m; ++l) {
    Matrix g = Matrix::Zero(m, m);
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) g(j, j) = c;
    g(l, l) = -c * l;
    basis.generators.push_back(std::move(g));
  }
  return basis;
}

std::string_view to_string(TargetKind kind) {
  return kind == TargetKind::state ? "state" : "unitary";
}

TargetKind target_kind_from_string(std::string_view s) {
  if (s == "state") return TargetKind::state;
  if (s == "unitary") return TargetKind::unitary;
  throw std::invalid_argument(fmt::format("unknown target kind '{}'", s));
}

TargetKind kind_of(const Target& target) {
  return std::holds_alternative<StateVector>(target) ? TargetKind::state : TargetKind::unitary;
}

const SystemDescriptor& system_of(const Target& target) {
  return std::visit([](const auto& t) -> const SystemDescriptor& { return t.system(); }, target);
}

namespace {

Complex uniform_complex(Rng& rng) {
  const double re = rng.uniform(-1.0, 1.0);
  const double im = rng.uniform(-1.0, 1.0);
  return {re, im};
}

// Two passes of modified Gram-Schmidt; returns false if a column collapsed.
bool orthonormalize_columns(Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index p = 0; p < c; ++p) {
        const Complex proj = m.col(p).dot(m.col(c));
        m.col(c) -= proj * m.col(p);
      }
    }
    const double norm = m.col(c).norm();
    if (!(norm > 1e-8)) return false;
    m.col(c) /= norm;
  }
  return true;
}

}  // namespace

Matrix raw_random_unitary(Rng& rng, Eigen::Index dim) {
  Matrix m(dim, dim);
  for (;;) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = uniform_complex(rng);
    }
    if (orthonormalize_columns(m)) return m;
  }
}

StateVector haar_randomize(const StateVector& target, int steps, std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("randomization steps must be >= 0");
  if (steps == 0) return target;
  Rng rng(seed);
  Vector v = target.amplitudes();
  for (int s = 0; s < steps; ++s) v = raw_random_unitary(rng, v.size()) * v;
  return StateVector::normalized(target.system(), std::move(v));
}

UnitaryMatrix haar_randomize(const UnitaryMatrix& target, int steps, std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("randomization steps must be >= 0");
  if (steps == 0) return target;
  Rng rng(seed);
  Matrix u = target.matrix();
  for (int s = 0; s < steps; ++s) u = raw_random_unitary(rng, u.rows()) * u;
  return UnitaryMatrix(target.system(), std::move(u));
}

StateVector random_state(const RandomTargetSpec& spec) {
  if (spec.kind != TargetKind::state) throw std::invalid_argument("random_state needs kind = state");
  if (spec.randomization_steps < 0) throw std::invalid_argument("randomization steps must be >= 0");
  Rng rng(derive_seed(spec.seed, 0));
  Vector v(spec.system.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform_complex(rng);
  StateVector raw = StateVector::normalized(spec.system, std::move(v));
  return haar_randomize(raw, spec.randomization_steps, derive_seed(spec.seed, 1));
}

UnitaryMatrix random_unitary(const RandomTargetSpec& spec) {
  if (spec.kind != TargetKind::unitary) throw std::invalid_argument("random_unitary needs kind = unitary");
  if (spec.randomization_steps < 0) throw std::invalid_argument("randomization steps must be >= 0");
  Rng rng(derive_seed(spec.seed, 0));
  UnitaryMatrix raw(spec.system, raw_random_unitary(rng, spec.system.rows()));
  return haar_randomize(raw, spec.randomization_steps, derive_seed(spec.seed, 1));
}

Target random_target(const RandomTargetSpec& spec) {
  if (spec.kind == TargetKind::state) return random_state(spec);
  return random_unitary(spec);
}

UnitaryMatrix random_unitary_exp(std::span<const double> lambdas, const GeneratorBasis& basis,
                                 const SystemDescriptor& system) {
  if (static_cast<std::size_t>(basis.dimension) != system.dim()) {
    throw std::invalid_argument("generator basis dimension does not match the register");
  }
  if (lambdas.size() != basis.size()) {
    throw std::invalid_argument(
        fmt::format("expected {} coefficients, got {}", basis.size(), lambdas.size()));
  }
  Matrix a = Matrix::Zero(system.rows(), system.rows());
  for (std::size_t j = 0; j < lambdas.size(); ++j) a += lambdas[j] * basis.generators[j];
  return UnitaryMatrix(system, expi_hermitian(a, 1.0));
}

Json to_json(const RandomTargetSpec& spec) {
  return Json{{"n", spec.system.qudits()},
              {"d", spec.system.levels()},
              {"kind", std::string(to_string(spec.kind))},
              {"seed", spec.seed},
              {"randomization_steps", spec.randomization_steps}};
}

Json to_json(const Target& target) {
  Json j = std::visit([](const auto& t) { return to_json(t); }, target);
  j["kind"] = std::string(to_string(kind_of(target)));
  return j;
}

Target target_from_json(const Json& j) {
  const TargetKind kind = target_kind_from_string(j.at("kind").get<std::string>());
  if (kind == TargetKind::state) return state_from_json(j);
  return unitary_from_json(j);
}

}  // namespace qcx
