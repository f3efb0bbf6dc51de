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

#include "qcx/bounds.hpp"

#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace qcx {

std::string_view to_string(Task task) {
  return task == Task::state_prep ? "state" : "unitary";
}

std::string_view to_string(Entangler entangler) {
  return entangler == Entangler::cz ? "cz" : "noncommuting";
}

Task task_from_string(std::string_view s) {
  if (s == "state" || s == "state_prep") return Task::state_prep;
  if (s == "unitary" || s == "unitary_synth") return Task::unitary_synth;
  throw std::invalid_argument(fmt::format("unknown task '{}'", s));
}

Entangler entangler_from_string(std::string_view s) {
  if (s == "cz") return Entangler::cz;
  if (s == "noncommuting") return Entangler::noncommuting;
  throw std::invalid_argument(fmt::format("unknown entangler '{}'", s));
}

std::int64_t ipow(std::int64_t base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  std::int64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > std::numeric_limits<std::int64_t>::max() / base) {
      throw std::overflow_error(fmt::format("{}^{} overflows int64", base, exponent));
    }
    out *= base;
  }
  return out;
}

namespace {

void check_nd(int n, int d) {
  if (n < 1) throw std::invalid_argument(fmt::format("n must be >= 1, got {}", n));
  if (d < 2) throw std::invalid_argument(fmt::format("d must be >= 2, got {}", d));
}

std::int64_t ceil_div_clamped(std::int64_t num, std::int64_t den) {
  if (num <= 0) return 0;
  return (num + den - 1) / den;
}

}  // namespace

std::int64_t target_param_count(int n, int d, Task task) {
  check_nd(n, d);
  if (task == Task::state_prep) return 2 * ipow(d, n) - 2;
  return ipow(d, 2 * n) - 1;
}

std::int64_t circuit_param_count(int n, int d, std::int64_t entanglers, Task task) {
  check_nd(n, d);
  if (entanglers < 0) throw std::invalid_argument("entangler count must be >= 0");
  const std::int64_t dd = d;
  if (task == Task::state_prep) return dd * (dd - 1) * (n + 2 * entanglers);
  return (dd * dd - 1) * n + 2 * dd * (dd - 1) * entanglers;
}

std::int64_t lower_bound(const BoundQuery& q) {
  check_nd(q.n, q.d);
  const std::int64_t d = q.d;
  const std::int64_t local = q.task == Task::state_prep ? d * (d - 1) * q.n : (d * d - 1) * q.n;
  const std::int64_t num = target_param_count(q.n, q.d, q.task) - local;
  const std::int64_t den = q.entangler == Entangler::cz ? 2 * d * (d - 1) : 2 * (d * d - 1);
  return ceil_div_clamped(num, den);
}

std::int64_t canonical_param_deficit(int n, int d) {
  check_nd(n, d);
  if (n < 2) throw std::invalid_argument("canonical decomposition needs n >= 2");
  const std::int64_t dd = d;
  return ipow(d, 2 * n) - 2 * n * dd * dd + 2 * n - 1;
}

}  // namespace qcx
