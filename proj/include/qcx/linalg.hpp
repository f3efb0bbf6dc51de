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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qcx {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Eigendecomposition H = W diag(values) W^dagger of a Hermitian matrix.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};

HermitianEigen hermitian_eigen(const Matrix& h);

/// exp(i t H) reconstructed from a Hermitian eigendecomposition.
Matrix expi(const HermitianEigen& eig, double t);
Matrix expi_hermitian(const Matrix& h, double t);

/// Divided differences of f(x) = exp(i t x) over the eigenvalues of H.
///
/// With Phi from this function, the directional derivative of exp(i t H)
/// along a Hermitian direction E is  W (Phi o (W^dagger E W)) W^dagger.
/// Nearly degenerate pairs use a series for (e^{ix} - 1) / (ix).
Matrix expi_divided_differences(const HermitianEigen& eig, double t);

/// Principal matrix logarithm of a unitary: returns Hermitian X with
/// exp(i X) = U and eigenvalues of X in (-pi, pi].
Matrix principal_log_unitary(const Matrix& u);

/// max_ij |U^dagger U - I|_ij
double unitarity_deviation(const Matrix& u);
/// max_ij |H - H^dagger|_ij
double hermiticity_deviation(const Matrix& h);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);

/// Hilbert-Schmidt inner product Tr(A^dagger B).
Complex hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);
/// A - Tr(A)/dim * I.
Matrix traceless_part(const Matrix& a);

/// Index arithmetic for a register of `qudits` digits of base `levels`,
/// big-endian: digit 0 is the most significant.
struct DigitLayout {
  int qudits = 1;
  int levels = 2;
  std::size_t dim = 2;

  std::size_t stride(int qudit) const;
  int digit(std::size_t index, int qudit) const;
};

/// m <- embed(u on qudit) * m
void apply_local_left(Matrix& m, const Matrix& u, int qudit, const DigitLayout& layout);
/// m <- m * embed(u on qudit)
void apply_local_right(Matrix& m, const Matrix& u, int qudit, const DigitLayout& layout);
/// v <- embed(u on qudit) * v
void apply_local(Vector& v, const Matrix& u, int qudit, const DigitLayout& layout);
/// Dense embedding of a single-qudit operator.
Matrix embed_local(const Matrix& u, int qudit, const DigitLayout& layout);

/// P with P_xy = sum_rest M_(x,rest),(y,rest), so Tr(M embed(X)) = Tr(P X).
Matrix partial_trace_keep(const Matrix& m, int qudit, const DigitLayout& layout);
/// Same contraction for the rank-one matrix M_ij = ket_i * row_j.
Matrix partial_trace_keep_outer(const Vector& ket, const Vector& row, int qudit,
                                const DigitLayout& layout);

}  // namespace qcx
