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
#include <string_view>

namespace qcx {

enum class Task { state_prep, unitary_synth };
enum class Entangler { cz, noncommuting };

std::string_view to_string(Task task);
std::string_view to_string(Entangler entangler);
Task task_from_string(std::string_view s);
Entangler entangler_from_string(std::string_view s);

struct BoundQuery {
  int n = 2;
  int d = 2;
  Task task = Task::unitary_synth;
  Entangler entangler = Entangler::cz;
};

/// Exact integer power; throws std::overflow_error past int64.
std::int64_t ipow(std::int64_t base, int exponent);

/// 2 d^n - 2 for states, d^{2n} - 1 for unitaries.
std::int64_t target_param_count(int n, int d, Task task);

/// Free parameters of an N-entangler CZ circuit after z-rotation elimination:
/// d(d-1)(n+2N) for states, (d^2-1)n + 2d(d-1)N for unitaries.
std::int64_t circuit_param_count(int n, int d, std::int64_t entanglers, Task task);

/// Smallest N whose circuit parameter count reaches the target's, clamped
/// at zero. The non-commuting variant charges d^2 - 1 per post-entangler gate.
std::int64_t lower_bound(const BoundQuery& query);

/// d^{2n} - 2nd^2 + 2n - 1: parameters left for the non-local generator once
/// 2n local rotations are factored off an n-qudit unitary.
std::int64_t canonical_param_deficit(int n, int d);

}  // namespace qcx
