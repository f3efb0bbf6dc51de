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

#include "qcx/qcore.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace qcx {

SystemDescriptor::SystemDescriptor(int qudits, int levels, std::size_t dimension_cap) {
  if (qudits < 1) throw std::invalid_argument(fmt::format("number of qudits must be >= 1, got {}", qudits));
  if (levels < 2) throw std::invalid_argument(fmt::format("qudit dimension must be >= 2, got {}", levels));
  std::size_t dim = 1;
  for (int q = 0; q < qudits; ++q) {
    if (dim > dimension_cap / static_cast<std::size_t>(levels)) {
      throw std::invalid_argument(
          fmt::format("register dimension {}^{} exceeds cap {}", levels, qudits, dimension_cap));
    }
    dim *= static_cast<std::size_t>(levels);
  }
  layout_ = DigitLayout{qudits, levels, dim};
}

StateVector::StateVector(SystemDescriptor system, Vector amplitudes)
    : system_(system), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != system_.dim()) {
    throw std::invalid_argument(fmt::format("state has {} amplitudes, register dimension is {}",
                                            amplitudes_.size(), system_.dim()));
  }
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument(fmt::format("state norm {} is not 1", norm));
  }
}

StateVector StateVector::normalized(SystemDescriptor system, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return StateVector(system, std::move(amplitudes));
}

StateVector StateVector::basis(SystemDescriptor system, std::size_t index) {
  if (index >= system.dim()) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(system.rows());
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(system, std::move(v));
}

UnitaryMatrix::UnitaryMatrix(SystemDescriptor system, Matrix entries)
    : system_(system), entries_(std::move(entries)) {
  if (entries_.rows() != system_.rows() || entries_.cols() != system_.rows()) {
    throw std::invalid_argument(fmt::format("matrix is {}x{}, register dimension is {}",
                                            entries_.rows(), entries_.cols(), system_.dim()));
  }
  const double dev = unitarity_deviation(entries_);
  if (!(dev <= kUnitaryTolerance)) {
    throw std::invalid_argument(fmt::format("matrix is not unitary (deviation {:.3e})", dev));
  }
}

UnitaryMatrix UnitaryMatrix::identity(SystemDescriptor system) {
  return UnitaryMatrix(system, Matrix::Identity(system.rows(), system.rows()));
}

UnitaryMatrix embed_two_qudit(const Matrix& gate, QuditPair pair, const SystemDescriptor& system) {
  const auto [a, b] = pair;
  const int n = system.qudits();
  const int d = system.levels();
  if (a < 0 || b < 0 || a >= n || b >= n) {
    throw std::out_of_range(fmt::format("qudit pair ({}, {}) out of range for {} qudits", a, b, n));
  }
  if (a == b) throw std::invalid_argument("two-qudit gate needs distinct qudits");
  if (gate.rows() != d * d || gate.cols() != d * d) {
    throw std::invalid_argument(fmt::format("two-qudit gate must be {0}x{0}", d * d));
  }
  const double dev = unitarity_deviation(gate);
  if (!(dev <= kUnitaryTolerance)) {
    throw std::invalid_argument(fmt::format("two-qudit gate is not unitary (deviation {:.3e})", dev));
  }

  const DigitLayout& lay = system.layout();
  const std::size_t sa = lay.stride(a);
  const std::size_t sb = lay.stride(b);
  Matrix out = Matrix::Zero(system.rows(), system.rows());
  for (std::size_t col = 0; col < lay.dim; ++col) {
    const int ka = lay.digit(col, a);
    const int kb = lay.digit(col, b);
    const std::size_t rest = col - ka * sa - kb * sb;
    const int gc = ka * d + kb;
    for (int ra = 0; ra < d; ++ra) {
      for (int rb = 0; rb < d; ++rb) {
        const Complex g = gate(ra * d + rb, gc);
        if (g == Complex{}) continue;
        out(static_cast<Eigen::Index>(rest + ra * sa + rb * sb), static_cast<Eigen::Index>(col)) = g;
      }
    }
  }
  return UnitaryMatrix(system, std::move(out));
}

double state_fidelity(const StateVector& a, const StateVector& b) {
  if (!(a.system() == b.system())) throw std::invalid_argument("state fidelity: system mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double unitary_fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument("unitary fidelity: dimension mismatch");
  }
  const double dim = static_cast<double>(u.rows());
  return std::norm((u.adjoint() * v).trace()) / (dim * dim);
}

double unitary_fidelity(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  if (!(u.system() == v.system())) throw std::invalid_argument("unitary fidelity: system mismatch");
  return unitary_fidelity(u.matrix(), v.matrix());
}

}  // namespace qcx
