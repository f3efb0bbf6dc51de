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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qcx/linalg.hpp"
#include "qcx/rng.hpp"
#include "test_util.hpp"

namespace qcx {
namespace {

TEST(Expi, PauliXRotation) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const double t = 0.37;
  Matrix expected(2, 2);
  expected << std::cos(t), kI * std::sin(t), kI * std::sin(t), std::cos(t);
  EXPECT_LT((expi_hermitian(x, t) - expected).norm(), 1e-14);
}

TEST(Expi, IsUnitaryAndInvertible) {
  Rng rng(3);
  for (int dim : {2, 3, 5, 9}) {
    const Matrix h = testing_util::random_hermitian(rng, dim);
    const Matrix u = expi_hermitian(h, 0.8);
    EXPECT_LT(unitarity_deviation(u), 1e-12);
    EXPECT_LT((u * expi_hermitian(h, -0.8) - Matrix::Identity(dim, dim)).norm(), 1e-12);
  }
}

TEST(DividedDifferences, MatchCentralFiniteDifferences) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int dim = 2 + trial;
    const Matrix h = testing_util::random_hermitian(rng, dim);
    const Matrix e = testing_util::random_hermitian(rng, dim);
    const double t = rng.uniform(-2.0, 2.0);
    const HermitianEigen eig = hermitian_eigen(h);
    const Matrix phi = expi_divided_differences(eig, t);
    const Matrix& w = eig.vectors;
    const Matrix analytic = w * phi.cwiseProduct(w.adjoint() * e * w) * w.adjoint();
    const double s = 1e-6;
    const Matrix fd = (expi_hermitian(h + s * e, t) - expi_hermitian(h - s * e, t)) / (2.0 * s);
    EXPECT_LT((analytic - fd).norm(), 1e-8) << "dim " << dim;
  }
}

TEST(DividedDifferences, DegenerateSpectrum) {
  Matrix h = Matrix::Identity(3, 3);
  h(2, 2) = 1.0 + 1e-9;
  Matrix e = Matrix::Zero(3, 3);
  e(0, 1) = e(1, 0) = 1.0;
  const HermitianEigen eig = hermitian_eigen(h);
  const Matrix phi = expi_divided_differences(eig, 1.0);
  const Matrix& w = eig.vectors;
  const Matrix analytic = w * phi.cwiseProduct(w.adjoint() * e * w) * w.adjoint();
  // exp(i(I + sE)) = e^i exp(isE), derivative i e^i E
  EXPECT_LT((analytic - kI * std::exp(kI) * e).norm(), 1e-8);
}

TEST(PrincipalLog, RoundTrip) {
  Rng rng(5);
  for (int dim : {2, 4, 6}) {
    const Matrix h = testing_util::random_hermitian(rng, dim);
    const Matrix u = expi_hermitian(h, 1.3);
    const Matrix x = principal_log_unitary(u);
    EXPECT_LT(hermiticity_deviation(x), 1e-12);
    EXPECT_LT((expi_hermitian(x, 1.0) - u).norm(), 1e-11);
    const RealVector ev = hermitian_eigen(x).values;
    EXPECT_LE(ev.maxCoeff(), std::numbers::pi + 1e-12);
    EXPECT_GT(ev.minCoeff(), -std::numbers::pi - 1e-12);
  }
}

TEST(PrincipalLog, SmallGeneratorIsRecovered) {
  Rng rng(8);
  const Matrix h = 0.1 * testing_util::random_hermitian(rng, 4);
  EXPECT_LT((principal_log_unitary(expi_hermitian(h, 1.0)) - h).norm(), 1e-12);
}

TEST(DigitLayout, BigEndianDigits) {
  const DigitLayout layout{3, 3, 27};
  EXPECT_EQ(layout.stride(0), 9u);
  EXPECT_EQ(layout.stride(2), 1u);
  // 14 = 1*9 + 1*3 + 2
  EXPECT_EQ(layout.digit(14, 0), 1);
  EXPECT_EQ(layout.digit(14, 1), 1);
  EXPECT_EQ(layout.digit(14, 2), 2);
}

TEST(ApplyLocal, MatchesDenseEmbedding) {
  Rng rng(21);
  const DigitLayout layout{3, 3, 27};
  const Matrix u = expi_hermitian(testing_util::random_hermitian(rng, 3), 1.0);
  const Matrix m = testing_util::random_matrix(rng, 27);
  for (int q = 0; q < 3; ++q) {
    const Matrix big = embed_local(u, q, layout);
    Matrix left = m;
    apply_local_left(left, u, q, layout);
    EXPECT_LT((left - big * m).norm(), 1e-12);
    Matrix right = m;
    apply_local_right(right, u, q, layout);
    EXPECT_LT((right - m * big).norm(), 1e-12);
    Vector v = m.col(0);
    apply_local(v, u, q, layout);
    EXPECT_LT((v - big * m.col(0)).norm(), 1e-12);
  }
}

TEST(EmbedLocal, QuditZeroIsLeftKroneckerFactor) {
  Rng rng(2);
  const DigitLayout layout{2, 3, 9};
  const Matrix u = testing_util::random_matrix(rng, 3);
  EXPECT_LT((embed_local(u, 0, layout) - kron(u, Matrix::Identity(3, 3))).norm(), 1e-14);
  EXPECT_LT((embed_local(u, 1, layout) - kron(Matrix::Identity(3, 3), u)).norm(), 1e-14);
}

TEST(PartialTrace, ContractsAgainstEmbedding) {
  Rng rng(13);
  const DigitLayout layout{3, 2, 8};
  const Matrix m = testing_util::random_matrix(rng, 8);
  const Matrix x = testing_util::random_matrix(rng, 2);
  const Vector ket = m.col(1);
  const Vector row = m.col(2);
  const Matrix outer = ket * row.transpose();
  for (int q = 0; q < 3; ++q) {
    const Matrix big = embed_local(x, q, layout);
    EXPECT_LT(std::abs((m * big).trace() - (partial_trace_keep(m, q, layout) * x).trace()), 1e-12);
    EXPECT_LT((partial_trace_keep_outer(ket, row, q, layout) - partial_trace_keep(outer, q, layout)).norm(), 1e-12);
  }
}

TEST(HilbertSchmidt, InnerProductAndTracelessPart) {
  Matrix a(2, 2);
  a << 1, kI, 0, 3;
  EXPECT_NEAR(hs_norm(a), std::sqrt(11.0), 1e-14);
  EXPECT_NEAR(std::abs(hs_inner(a, a) - 11.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(traceless_part(a).trace()), 0.0, 1e-14);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  EXPECT_LT((commutator(x, y) - 2.0 * kI * z).norm(), 1e-14);
}

}  // namespace
}  // namespace qcx
