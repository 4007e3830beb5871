// SPDX-License-Identifier: Apache-2.0
#include "graphvar/optimize.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <utility>

namespace graphvar {

std::string to_string(DescentStatus s) {
  switch (s) {
    case DescentStatus::converged: return "converged";
    case DescentStatus::max_iterations: return "max_iterations";
    case DescentStatus::line_search_failed: return "line_search_failed";
    case DescentStatus::non_finite: return "non_finite";
    case DescentStatus::diverged: return "diverged";
  }
  return "unknown";
}

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::deque<CurvaturePair>& mem) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  const auto& last = mem.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

}  // namespace

DescentResult minimize(const Objective& f, Eigen::VectorXd x0, const DescentOptions& opts) {
  DescentResult res;
  res.x = std::move(x0);
  Eigen::VectorXd g(res.x.size());
  res.value = f(res.x, &g);
  res.grad_norm = g.norm();
  if (!std::isfinite(res.value) || !g.allFinite()) {
    res.status = DescentStatus::non_finite;
    return res;
  }

  std::deque<CurvaturePair> mem;
  Eigen::VectorXd g_new(res.x.size());
  Eigen::VectorXd x_new(res.x.size());

  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    if (res.grad_norm <= opts.tolerance) {
      res.status = DescentStatus::converged;
      return res;
    }

    Eigen::VectorXd d;
    double step = 1.0;
    if (!mem.empty()) {
      d = two_loop(g, mem);
      if (!(d.dot(g) < 0.0) || !d.allFinite()) {
        mem.clear();
      }
    }
    if (mem.empty()) {
      d = -g;
      // First steepest step moves at most unit length.
      step = std::min(1.0, 1.0 / res.grad_norm);
    }

    const double slope = g.dot(d);
    double f_new = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      x_new = res.x + step * d;
      f_new = f(x_new, &g_new);
      if (!std::isfinite(f_new) || !g_new.allFinite()) {
        step *= opts.backtrack;
        continue;
      }
      if (f_new <= res.value + opts.armijo * step * slope) {
        accepted = true;
        break;
      }
      // Predicted decrease below the rounding level of f: the Armijo test
      // cannot resolve it, so accept a step that does not raise f beyond
      // roundoff and strictly shrinks the gradient.
      const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(res.value);
      if (-step * slope <= noise && f_new <= res.value + noise && g_new.norm() < res.grad_norm) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      if (!mem.empty()) {
        // Retry from the gradient direction before giving up.
        mem.clear();
        --res.iterations;
        continue;
      }
      res.status = std::isfinite(f_new) ? DescentStatus::line_search_failed
                                        : DescentStatus::non_finite;
      return res;
    }

    CurvaturePair pair{x_new - res.x, g_new - g, 0.0};
    const double sy = pair.s.dot(pair.y);
    if (opts.memory > 0 && sy > 1e-14 * pair.s.norm() * pair.y.norm()) {
      pair.rho = 1.0 / sy;
      mem.push_back(std::move(pair));
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }

    std::swap(res.x, x_new);
    std::swap(g, g_new);
    res.value = f_new;
    res.grad_norm = g.norm();
    if (opts.record_trace) res.trace.push_back(res.value);

    if (opts.max_abs_coordinate > 0.0 && res.x.cwiseAbs().maxCoeff() > opts.max_abs_coordinate) {
      res.status = DescentStatus::diverged;
      return res;
    }
  }
  res.status = res.grad_norm <= opts.tolerance ? DescentStatus::converged
                                               : DescentStatus::max_iterations;
  return res;
}

}  // namespace graphvar
