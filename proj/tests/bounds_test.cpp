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

#include <array>
#include <stdexcept>

#include <gtest/gtest.h>

#include "qcx/bounds.hpp"
#include "qcx/circuits.hpp"

namespace qcx {
namespace {

struct TableEntry {
  int n;
  int d;
  std::int64_t state;
  std::int64_t unitary;
};

// Lower-bound columns of the gate-count table.
constexpr std::array<TableEntry, 9> kTable{{
    {2, 2, 1, 3},
    {3, 2, 2, 14},
    {4, 2, 6, 61},
    {2, 3, 1, 6},
    {3, 3, 3, 59},
    {4, 3, 12, 544},
    {2, 4, 1, 10},
    {3, 4, 4, 169},
    {4, 4, 20, 2729},
}};

TEST(LowerBound, GateCountTable) {
  for (const TableEntry& e : kTable) {
    EXPECT_EQ(lower_bound({e.n, e.d, Task::state_prep, Entangler::cz}), e.state) << e.n << "," << e.d;
    EXPECT_EQ(lower_bound({e.n, e.d, Task::unitary_synth, Entangler::cz}), e.unitary) << e.n << "," << e.d;
  }
}

TEST(LowerBound, NonCommuting) {
  EXPECT_EQ(lower_bound({2, 2, Task::unitary_synth, Entangler::noncommuting}), 2);
  for (int n = 2; n <= 5; ++n) {
    for (int d = 2; d <= 5; ++d) {
      for (Task t : {Task::state_prep, Task::unitary_synth}) {
        EXPECT_LE(lower_bound({n, d, t, Entangler::noncommuting}), lower_bound({n, d, t, Entangler::cz}));
      }
    }
  }
}

TEST(LowerBound, ClampsAtZero) {
  EXPECT_EQ(lower_bound({1, 3, Task::unitary_synth, Entangler::cz}), 0);
  EXPECT_EQ(lower_bound({1, 2, Task::state_prep, Entangler::cz}), 0);
}

TEST(ParamCounts, Examples) {
  EXPECT_EQ(target_param_count(2, 2, Task::unitary_synth), 15);
  EXPECT_EQ(target_param_count(3, 3, Task::unitary_synth), 728);
  EXPECT_EQ(target_param_count(2, 2, Task::state_prep), 6);
  EXPECT_EQ(circuit_param_count(2, 2, 1, Task::state_prep), 8);
  EXPECT_EQ(circuit_param_count(2, 2, 3, Task::unitary_synth), 18);
  EXPECT_EQ(circuit_param_count(2, 3, 6, Task::unitary_synth), 88);
}

TEST(ParamCounts, MatchCircuitLayouts) {
  for (int n = 2; n <= 3; ++n) {
    for (int d = 2; d <= 4; ++d) {
      for (std::size_t N = 0; N <= 3; ++N) {
        const CircuitConfig config(SystemDescriptor(n, d), std::vector<QuditPair>(N, QuditPair{0, 1}));
        for (Task t : {Task::state_prep, Task::unitary_synth}) {
          EXPECT_EQ(static_cast<std::int64_t>(make_layout(config, t).total),
                    circuit_param_count(n, d, static_cast<std::int64_t>(N), t));
        }
      }
    }
  }
}

TEST(CanonicalDeficit, Examples) {
  EXPECT_EQ(canonical_param_deficit(2, 2), 3);
  EXPECT_EQ(canonical_param_deficit(3, 2), 45);
  EXPECT_EQ(canonical_param_deficit(2, 3), 48);
  EXPECT_THROW(canonical_param_deficit(1, 2), std::invalid_argument);
}

TEST(LowerBoundProperty, MonotoneAndMinimal) {
  for (int d = 2; d <= 5; ++d) {
    for (Task t : {Task::state_prep, Task::unitary_synth}) {
      std::int64_t previous = 0;
      for (int n = 2; n <= 8; ++n) {
        const std::int64_t lb = lower_bound({n, d, t, Entangler::cz});
        EXPECT_GE(lb, previous);
        previous = lb;
        const std::int64_t need = target_param_count(n, d, t);
        EXPECT_GE(circuit_param_count(n, d, lb, t), need);
        if (lb > 0) EXPECT_LT(circuit_param_count(n, d, lb - 1, t), need);
      }
    }
  }
}

TEST(Ipow, OverflowThrows) {
  EXPECT_EQ(ipow(4, 8), 65536);
  EXPECT_THROW(ipow(10, 30), std::overflow_error);
}

TEST(Strings, RoundTrip) {
  EXPECT_EQ(task_from_string(to_string(Task::state_prep)), Task::state_prep);
  EXPECT_EQ(entangler_from_string(to_string(Entangler::noncommuting)), Entangler::noncommuting);
  EXPECT_THROW(task_from_string("gate"), std::invalid_argument);
}

}  // namespace
}  // namespace qcx
