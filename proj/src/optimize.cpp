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

#include "qcx/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include <ceres/ceres.h>

namespace qcx {

namespace {

class ObjectiveAdapter final : public ceres::FirstOrderFunction {
 public:
  ObjectiveAdapter(const GradientObjective& objective, int size) : objective_(objective), size_(size) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    std::span<const double> x(parameters, static_cast<std::size_t>(size_));
    std::span<double> g;
    if (gradient != nullptr) g = std::span<double>(gradient, static_cast<std::size_t>(size_));
    *cost = objective_(x, g);
    if (!std::isfinite(*cost)) return false;
    for (double gi : g) {
      if (!std::isfinite(gi)) return false;
    }
    return true;
  }

  int NumParameters() const override { return size_; }

 private:
  const GradientObjective& objective_;
  int size_;
};

class StopAtTarget final : public ceres::IterationCallback {
 public:
  StopAtTarget(double target, std::vector<double>* trace) : target_(target), trace_(trace) {}

  ceres::CallbackReturnType operator()(const ceres::IterationSummary& summary) override {
    if (trace_ != nullptr && (summary.iteration == 0 || summary.step_is_successful)) {
      trace_->push_back(summary.cost);
    }
    if (summary.cost <= target_) return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
    return ceres::SOLVER_CONTINUE;
  }

 private:
  double target_;
  std::vector<double>* trace_;
};

}  // namespace

MinimizerResult minimize(const GradientObjective& objective, std::vector<double> x0,
                         const MinimizerSettings& settings) {
  MinimizerResult result;
  if (x0.empty()) {
    result.cost = objective(std::span<const double>(), std::span<double>());
    result.finite = std::isfinite(result.cost);
    result.termination = "no parameters";
    if (settings.record_trace) result.trace.push_back(result.cost);
    return result;
  }
  const double initial = objective(x0, std::span<double>());
  if (!std::isfinite(initial)) {
    result.x = std::move(x0);
    result.cost = initial;
    result.finite = false;
    result.termination = "non-finite initial cost";
    return result;
  }

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type =
      settings.direction == QuasiNewton::bfgs ? ceres::BFGS : ceres::LBFGS;
  options.line_search_type = ceres::WOLFE;
  options.max_num_iterations = settings.max_iterations;
  options.function_tolerance = settings.function_tolerance;
  options.gradient_tolerance = settings.gradient_tolerance;
  options.parameter_tolerance = settings.parameter_tolerance;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  StopAtTarget callback(settings.target_cost, settings.record_trace ? &result.trace : nullptr);
  options.callbacks.push_back(&callback);

  const int size = static_cast<int>(x0.size());
  // GradientProblem takes ownership of the function.
  ceres::GradientProblem problem(new ObjectiveAdapter(objective, size));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x0.data(), &summary);

  result.x = std::move(x0);
  result.cost = objective(result.x, std::span<double>());
  result.finite = std::isfinite(result.cost);
  result.iterations = static_cast<int>(summary.iterations.size());
  result.termination = ceres::TerminationTypeToString(summary.termination_type);
  return result;
}

}  // namespace qcx
