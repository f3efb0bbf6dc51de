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

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qcx {

/// Objective: returns the cost at x and writes the gradient when `grad` is
/// non-empty.
using GradientObjective = std::function<double(std::span<const double> x, std::span<double> grad)>;

enum class QuasiNewton { bfgs, lbfgs };

struct MinimizerSettings {
  QuasiNewton direction = QuasiNewton::bfgs;
  int max_iterations = 3000;
  /// Stop as soon as the cost drops to this value.
  double target_cost = 0.0;
  double function_tolerance = 1e-13;
  double gradient_tolerance = 1e-14;
  double parameter_tolerance = 1e-14;
  /// Record the cost after every accepted iteration.
  bool record_trace = false;
};

struct MinimizerResult {
  std::vector<double> x;
  double cost = 0.0;
  int iterations = 0;
  bool finite = true;
  std::string termination;
  std::vector<double> trace;
};

/// Line-search quasi-Newton minimization (Ceres GradientProblemSolver).
/// Each accepted step satisfies the Wolfe sufficient-decrease condition.
MinimizerResult minimize(const GradientObjective& objective, std::vector<double> x0,
                         const MinimizerSettings& settings);

}  // namespace qcx
