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

#include "qcx/speedest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qcx/bounds.hpp"
#include "qcx/rng.hpp"

namespace qcx {

UnitaryMatrix deform_unitary(const UnitaryMatrix& base, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be finite and >= 0");
  if (epsilon == 0.0) return base;
  const Eigen::Index dim = base.matrix().rows();
  Rng rng(seed);
  Matrix a(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double re = rng.uniform(-1.0, 1.0);
      a(r, c) = Complex(re, rng.uniform(-1.0, 1.0));
    }
  }
  Matrix g = traceless_part(0.5 * (a + a.adjoint()));
  g /= hs_norm(g);
  return UnitaryMatrix(base.system(), expi_hermitian(g, epsilon) * base.matrix());
}

Matrix bch_commutator_sequence(const Matrix& ha, const Matrix& hb, double tau) {
  if (ha.rows() != hb.rows() || ha.cols() != hb.cols() || ha.rows() != ha.cols()) {
    throw std::invalid_argument("BCH sequence needs square operators of equal dimension");
  }
  const HermitianEigen ea = hermitian_eigen(ha);
  const HermitianEigen eb = hermitian_eigen(hb);
  return expi(eb, tau) * expi(ea, tau) * expi(eb, -tau) * expi(ea, -tau);
}

GeneratorLog unitary_generator(const UnitaryMatrix& u) {
  constexpr double kBranchMargin = 1e-6;
  const double pi = std::numbers::pi;
  Matrix x = principal_log_unitary(u.matrix());
  const RealVector values = hermitian_eigen(x).values;
  std::vector<double> phases(values.begin(), values.end());
  std::sort(phases.begin(), phases.end());
  GeneratorLog out;
  if (phases.front() < -pi + kBranchMargin || phases.back() > pi - kBranchMargin) {
    // Move the branch cut into the middle of the widest gap between eigenphases.
    double best_gap = phases.front() + 2.0 * pi - phases.back();
    double centre = phases.back() + 0.5 * best_gap;
    for (std::size_t i = 0; i + 1 < phases.size(); ++i) {
      const double gap = phases[i + 1] - phases[i];
      if (gap > best_gap) {
        best_gap = gap;
        centre = phases[i] + 0.5 * gap;
      }
    }
    out.phase = pi - centre;
    x = principal_log_unitary(std::polar(1.0, out.phase) * u.matrix());
  }
  out.phase -= x.trace().real() / static_cast<double>(x.rows());
  out.generator = traceless_part(x);
  return out;
}

std::size_t HierarchyDecomposition::span() const {
  std::size_t total = 0;
  for (const HierarchyLayer& l : layers) total += l.basis.size();
  return total;
}

HierarchyDecomposition hierarchy_decompose(const UnitaryMatrix& target, const Matrix& h0,
                                           const std::vector<Matrix>& controls) {
  if (h0.rows() != target.matrix().rows()) throw std::invalid_argument("target and Hamiltonian dimensions differ");
  for (const Matrix& c : controls) {
    if (c.rows() != h0.rows()) throw std::invalid_argument("control dimension differs from H0");
  }
  const GeneratorLog log = unitary_generator(target);
  HierarchyDecomposition out;
  out.generator = log.generator;
  out.phase = log.phase;
  out.generator_norm = hs_norm(log.generator);

  std::vector<Matrix> gens{h0};
  gens.insert(gens.end(), controls.begin(), controls.end());
  Matrix rest = log.generator;
  int depth = 1;
  for (auto& basis : commutator_layers(gens)) {
    HierarchyLayer layer;
    layer.depth = depth++;
    double sq = 0.0;
    for (const Matrix& b : basis) {
      const double c = hs_inner(b, log.generator).real();
      sq += c * c;
      rest -= c * b;
    }
    layer.norm = std::sqrt(sq);
    layer.basis = std::move(basis);
    out.layers.push_back(std::move(layer));
  }
  out.residual = hs_norm(rest);
  return out;
}

double time_estimate(const std::vector<double>& layer_norms, double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be positive");
  double total = 0.0;
  for (std::size_t k = 0; k < layer_norms.size(); ++k) {
    total += std::pow(layer_norms[k], 1.0 / static_cast<double>(k + 1));
  }
  return total / hbar;
}

double time_estimate(const HierarchyDecomposition& decomposition, double hbar) {
  std::vector<double> norms;
  for (const HierarchyLayer& l : decomposition.layers) norms.push_back(l.norm);
  return time_estimate(norms, hbar);
}

double default_hbar(const ControlSystem& cs) {
  Matrix h = cs.h0;
  for (const Matrix& c : cs.controls) h += c;
  return hs_norm(h);
}

KBounds k_bounds(int n, int d, int m) {
  if (m < 1) throw std::invalid_argument("need at least one control term");
  if (n < 1 || d < 2) throw std::invalid_argument("need n >= 1 and d >= 2");
  const std::int64_t dim2 = ipow(ipow(d, n), 2);
  const std::int64_t needed = 2 * (dim2 - 1);
  KBounds b;
  // Smallest k >= 1 with M (M + 1)^(k - 1) >= 2 (d^(2n) - 1).
  long double reach = m;
  while (reach < static_cast<long double>(needed)) {
    reach *= static_cast<long double>(m + 1);
    ++b.low;
  }
  b.high = std::max<std::int64_t>(1, dim2 - m - 1);
  return b;
}

Json to_json(const HierarchyDecomposition& decomposition) {
  Json layers = Json::array();
  for (const HierarchyLayer& l : decomposition.layers) {
    layers.push_back({{"depth", l.depth}, {"dimension", l.basis.size()}, {"norm", l.norm}});
  }
  return Json{{"generator_norm", decomposition.generator_norm},
              {"phase", decomposition.phase},
              {"residual", decomposition.residual},
              {"span", decomposition.span()},
              {"layers", layers}};
}

}  // namespace qcx
