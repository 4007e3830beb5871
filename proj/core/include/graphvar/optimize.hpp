// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

namespace graphvar {

/// Objective callback: returns f(x) and, when grad is non-null, writes the
/// gradient into it.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct DescentOptions {
  double tolerance = 1e-8;      ///< stop when ||grad||_2 <= tolerance
  int max_iterations = 10000;
  double armijo = 1e-4;         ///< sufficient decrease constant
  double backtrack = 0.5;       ///< step shrink factor
  int max_backtracks = 60;
  int memory = 8;               ///< L-BFGS pairs kept; 0 gives plain steepest descent
  double max_abs_coordinate = 0.0;  ///< abort once any |x_i| exceeds this (0 disables)
  bool record_trace = false;
};

enum class DescentStatus {
  converged,
  max_iterations,
  line_search_failed,
  non_finite,
  diverged,
};

[[nodiscard]] std::string to_string(DescentStatus s);

struct DescentResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  DescentStatus status = DescentStatus::max_iterations;
  /// Objective after each accepted step (only when record_trace is set).
  std::vector<double> trace;

  [[nodiscard]] bool converged() const noexcept { return status == DescentStatus::converged; }
};

/// Armijo-backtracked descent. Directions come from the L-BFGS two-loop
/// recursion (curvature-informed step scaling); any direction that fails to
/// be a descent direction is replaced by the negative gradient and the
/// curvature memory is cleared.
[[nodiscard]] DescentResult minimize(const Objective& f, Eigen::VectorXd x0,
                                     const DescentOptions& opts = {});

}  // namespace graphvar
