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

#include "qcx/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qcx {

HermitianEigen hermitian_eigen(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix expi(const HermitianEigen& eig, double t) {
  const Eigen::Index n = eig.values.size();
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::exp(kI * (t * eig.values(k)));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix expi_hermitian(const Matrix& h, double t) { return expi(hermitian_eigen(h), t); }

namespace {

// (e^{ix} - 1) / (ix)
Complex phi1(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return {1.0 - x2 / 6.0, x / 2.0 - x * x2 / 24.0};
  }
  return (std::exp(kI * x) - 1.0) / (kI * x);
}

}  // namespace

Matrix expi_divided_differences(const HermitianEigen& eig, double t) {
  const Eigen::Index n = eig.values.size();
  Matrix phi(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const Complex eb = std::exp(kI * (t * eig.values(b)));
    for (Eigen::Index a = 0; a < n; ++a) {
      const double x = t * (eig.values(a) - eig.values(b));
      phi(a, b) = kI * t * eb * phi1(x);
    }
  }
  return phi;
}

Matrix principal_log_unitary(const Matrix& u) {
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw std::runtime_error("schur decomposition failed");
  }
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  const Eigen::Index n = u.rows();
  RealVector angles(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double a = std::arg(t(k, k));
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    angles(k) = a;
  }
  Matrix x = q * angles.cast<Complex>().asDiagonal() * q.adjoint();
  return 0.5 * (x + x.adjoint());
}

double unitarity_deviation(const Matrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  const Matrix e = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return e.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const Matrix& h) {
  if (h.rows() != h.cols()) return INFINITY;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

double hs_norm(const Matrix& a) { return a.norm(); }

Matrix traceless_part(const Matrix& a) {
  const Complex tr = a.trace() / static_cast<double>(a.rows());
  Matrix out = a;
  out.diagonal().array() -= tr;
  return out;
}

std::size_t DigitLayout::stride(int qudit) const {
  std::size_t s = 1;
  for (int q = qudits - 1; q > qudit; --q) s *= static_cast<std::size_t>(levels);
  return s;
}

int DigitLayout::digit(std::size_t index, int qudit) const {
  return static_cast<int>((index / stride(qudit)) % static_cast<std::size_t>(levels));
}

namespace {

// Calls fn(base) for every index whose digit on `qudit` is zero.
template <typename Fn>
void for_each_base(const DigitLayout& layout, int qudit, Fn&& fn) {
  const std::size_t s = layout.stride(qudit);
  const std::size_t block = s * static_cast<std::size_t>(layout.levels);
  for (std::size_t hi = 0; hi < layout.dim; hi += block) {
    for (std::size_t lo = 0; lo < s; ++lo) fn(hi + lo, s);
  }
}

}  // namespace

void apply_local_left(Matrix& m, const Matrix& u, int qudit, const DigitLayout& layout) {
  const int d = layout.levels;
  std::vector<Complex> buf(static_cast<std::size_t>(d));
  for_each_base(layout, qudit, [&](std::size_t base, std::size_t s) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (int x = 0; x < d; ++x) {
        Complex acc = 0.0;
        for (int y = 0; y < d; ++y) acc += u(x, y) * m(static_cast<Eigen::Index>(base + y * s), c);
        buf[static_cast<std::size_t>(x)] = acc;
      }
      for (int x = 0; x < d; ++x) m(static_cast<Eigen::Index>(base + x * s), c) = buf[static_cast<std::size_t>(x)];
    }
  });
}

void apply_local_right(Matrix& m, const Matrix& u, int qudit, const DigitLayout& layout) {
  const int d = layout.levels;
  std::vector<Complex> buf(static_cast<std::size_t>(d));
  for_each_base(layout, qudit, [&](std::size_t base, std::size_t s) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (int y = 0; y < d; ++y) {
        Complex acc = 0.0;
        for (int x = 0; x < d; ++x) acc += m(r, static_cast<Eigen::Index>(base + x * s)) * u(x, y);
        buf[static_cast<std::size_t>(y)] = acc;
      }
      for (int y = 0; y < d; ++y) m(r, static_cast<Eigen::Index>(base + y * s)) = buf[static_cast<std::size_t>(y)];
    }
  });
}

void apply_local(Vector& v, const Matrix& u, int qudit, const DigitLayout& layout) {
  const int d = layout.levels;
  std::vector<Complex> buf(static_cast<std::size_t>(d));
  for_each_base(layout, qudit, [&](std::size_t base, std::size_t s) {
    for (int x = 0; x < d; ++x) {
      Complex acc = 0.0;
      for (int y = 0; y < d; ++y) acc += u(x, y) * v(static_cast<Eigen::Index>(base + y * s));
      buf[static_cast<std::size_t>(x)] = acc;
    }
    for (int x = 0; x < d; ++x) v(static_cast<Eigen::Index>(base + x * s)) = buf[static_cast<std::size_t>(x)];
  });
}

Matrix embed_local(const Matrix& u, int qudit, const DigitLayout& layout) {
  Matrix m = Matrix::Identity(static_cast<Eigen::Index>(layout.dim), static_cast<Eigen::Index>(layout.dim));
  apply_local_left(m, u, qudit, layout);
  return m;
}

Matrix partial_trace_keep(const Matrix& m, int qudit, const DigitLayout& layout) {
  const int d = layout.levels;
  Matrix p = Matrix::Zero(d, d);
  for_each_base(layout, qudit, [&](std::size_t base, std::size_t s) {
    for (int x = 0; x < d; ++x) {
      for (int y = 0; y < d; ++y) {
        p(x, y) += m(static_cast<Eigen::Index>(base + x * s), static_cast<Eigen::Index>(base + y * s));
      }
    }
  });
  return p;
}

Matrix partial_trace_keep_outer(const Vector& ket, const Vector& row, int qudit,
                                const DigitLayout& layout) {
  const int d = layout.levels;
  Matrix p = Matrix::Zero(d, d);
  for_each_base(layout, qudit, [&](std::size_t base, std::size_t s) {
    for (int x = 0; x < d; ++x) {
      const Complex kx = ket(static_cast<Eigen::Index>(base + x * s));
      for (int y = 0; y < d; ++y) {
        p(x, y) += kx * row(static_cast<Eigen::Index>(base + y * s));
      }
    }
  });
  return p;
}

}  // namespace qcx
