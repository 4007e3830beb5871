// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphvar/energy.hpp"

namespace graphvar {

struct SolverConfig {
  int starts = 8;  ///< random starts per amplitude scale
  std::vector<double> amplitudes{0.5, 5.0, 50.0};  ///< scales of the uniform random starts
  std::vector<double> probe_amplitudes{1.0, 10.0};  ///< constant / spike start amplitudes
  double tolerance = 1e-8;  ///< absolute Euclidean norm of the energy gradient
  int max_iterations = 10000;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int memory = 8;  ///< L-BFGS pairs; 0 gives plain gradient descent
  std::uint64_t seed = 1;
  double distinct_rel = 1e-4;  ///< distinctness radius relative to 1 + ||state||
  double amplitude_cap = 1e8;  ///< descents leaving this box are abandoned
  bool deflation = true;
  double deflation_weight = 1.0;  ///< bump height relative to 1 + |I| at the accepted point
  double deflation_width = 0.1;   ///< bump width relative to 1 + ||x|| at the accepted point
  int deflation_iterations = 200;
  int batch_size = 8;  ///< starts per deterministic batch
  int threads = 1;
};

/// Throws ParameterError for out-of-range settings.
void validate(const SolverConfig& cfg);

struct CriticalPoint {
  Eigen::VectorXd coords;  ///< free coordinates
  State state;
  double phi = 0.0;
  double psi = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  int start = -1;
  std::string origin;
  int iterations = 0;
};

struct StartRecord {
  int index = 0;
  std::string origin;
  std::string status;  ///< descent status, or "skipped_nan"
  int iterations = 0;
  double residual = 0.0;
  std::string outcome;  ///< accepted, duplicate, not_converged, non_finite, diverged
};

struct SolveReport {
  std::vector<CriticalPoint> points;              ///< sorted by phi ascending
  std::vector<std::vector<double>> distances;     ///< pairwise system-norm distances
  std::vector<StartRecord> starts;
  int starts_used = 0;
  long long iterations = 0;
  double wall_time = 0.0;  ///< seconds; not part of the deterministic report body
};

/// The start set, in order: zero, the probe states at each probe amplitude,
/// then uniform random states in [-a, a] for each amplitude a.
struct Start {
  Eigen::VectorXd coords;
  std::string origin;
};
[[nodiscard]] std::vector<Start> make_starts(const EnergyProblem& problem, const SolverConfig& cfg);

/// Multi-start descent with deflation. Extra starts are tried first, in the
/// given order.
[[nodiscard]] SolveReport solve(const EnergyProblem& problem, const SolverConfig& cfg,
                                std::span<const Eigen::VectorXd> extra_starts = {});

struct ProbeStep {
  double xi = 0.0;
  double eta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double energy = 0.0;
  double phi_closed = 0.0;  ///< closed-form Phi of the probe state
  double bound = 0.0;       ///< constant probe: rho (xi^p + eta^q) - lambda Psi
};

struct ProbeTrace {
  std::string kind;  ///< constant or spike
  std::vector<ProbeStep> steps;
  double floor = -1e6;
  bool below_floor = false;
  double max_phi_error = 0.0;        ///< relative
  double max_gradient_error = 0.0;   ///< spike: relative error of the gradient-length closed forms
  double max_higher_gradient = 0.0;  ///< constant: largest |grad^m u| observed (should be 0)
  bool bound_holds = true;           ///< constant: I <= bound at every step
  double rho = 0.0;
  std::optional<std::string> x0;
  bool x0_minimizes = false;  ///< spike: x0 minimizes both spike masses
};

/// xi_k = amplitude * 2^{k - steps}, k = 1..steps (all zero for amplitude 0).
[[nodiscard]] std::vector<double> probe_sequence(double amplitude, int steps);

/// Constant states u = xi, v = eta on a finite_poly system.
[[nodiscard]] ProbeTrace probe_unbounded_constant(const EnergyProblem& problem,
                                                  std::span<const double> xi,
                                                  std::span<const double> eta, double floor = -1e6);

/// Spike states xi 1_{x0}, eta 1_{x0} on a pq_wh system.
[[nodiscard]] ProbeTrace probe_unbounded_spike(const EnergyProblem& problem, VertexIndex x0,
                                               std::span<const double> xi,
                                               std::span<const double> eta, double floor = -1e6);

}  // namespace graphvar
