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

#include "qcx/serialize.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace qcx {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("complex entry must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const SystemDescriptor& s) { return Json{{"n", s.qudits()}, {"d", s.levels()}}; }

Json to_json(const StateVector& s) {
  return Json{{"system", to_json(s.system())}, {"amplitudes", to_json(s.amplitudes())}};
}

Json to_json(const UnitaryMatrix& u) {
  return Json{{"system", to_json(u.system())}, {"matrix", to_json(u.matrix())}};
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("vector must be a JSON array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw std::invalid_argument("matrix rows must be arrays");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

SystemDescriptor system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("d")) {
    throw std::invalid_argument("system must be an object with n and d");
  }
  return SystemDescriptor(j.at("n").get<int>(), j.at("d").get<int>());
}

StateVector state_from_json(const Json& j) {
  return StateVector(system_from_json(j.at("system")), vector_from_json(j.at("amplitudes")));
}

UnitaryMatrix unitary_from_json(const Json& j) {
  return UnitaryMatrix(system_from_json(j.at("system")), matrix_from_json(j.at("matrix")));
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

}  // namespace qcx
