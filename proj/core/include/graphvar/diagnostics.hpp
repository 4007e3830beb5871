// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphvar/energy.hpp"
#include "graphvar/spaces.hpp"

namespace graphvar {

struct IdentityCheck {
  std::string name;
  double worst = 0.0;  ///< largest relative error observed
  double tolerance = 0.0;
  int samples = 0;
  bool pass = true;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  [[nodiscard]] bool pass() const noexcept;
};

/// Runs the operator identities on `trials` random function pairs:
///  - gamma_directional: Gamma(u,v)(x) = sum_y D_{w,y}u(x) D_{w,y}v(x)
///  - summation_by_parts(l): int (Delta_l u) v = -int |grad u|^{l-2} Gamma(u,v)
///  - l2_laplacian: Delta_2 = Delta on every basis vector
///  - laplacian_symmetry: int (Delta u) v = int u (Delta v)
///  - poly_first_variation(m,l): the weak poly-Laplacian pairing equals the
///    derivative of (1/l) int |grad^m u|^l along phi
/// Relative errors are normalized by the absolute size of the summands.
[[nodiscard]] IdentityReport check_identities(const GraphPtr& g, int trials,
                                              std::span<const double> l_set,
                                              std::span<const int> m_set, std::uint64_t seed,
                                              double tolerance = 1e-10);

struct EmbeddingTarget {
  NormSpec spec;
  double r = kInfinity;  ///< target L^r norm; kInfinity for the sup norm
};

struct EmbeddingCheck {
  std::string label;
  EmbeddingTarget target;
  double closed = 0.0;   ///< closed-form constant
  double numeric = -1.0; ///< best constant, -1 when not computed
  int samples = 0;
  int violations = 0;
  double sharpest = 0.0;  ///< max observed ratio / closed constant
  bool numeric_within = true;
};

struct EmbeddingReport {
  std::vector<EmbeddingCheck> checks;
  [[nodiscard]] bool pass() const noexcept;
  [[nodiscard]] int violations() const noexcept;
};

/// Sup-norm targets of the finite-graph norms (m = 1, 2; l = 2, 3), and,
/// when the potentials allow it, the sup-norm and L^r (r = l, 2l) targets of
/// the W_h norms.
[[nodiscard]] std::vector<EmbeddingTarget> default_embedding_targets(const WeightedGraph& g);

/// Samples random functions (uniform, spikes, near-constants) and counts
/// violations of ||u||_target <= K ||u||_spec for the closed-form K. With
/// `numeric` set, also computes the best constant and checks it is <= K.
[[nodiscard]] EmbeddingReport check_embeddings(const GraphPtr& g,
                                               std::span<const EmbeddingTarget> targets,
                                               int samples, std::uint64_t seed,
                                               bool numeric = true);

struct VarphiOptions {
  int starts = 8;
  int iterations = 300;
  std::uint64_t seed = 1;
};

struct VarphiEstimate {
  double r = 0.0;
  double value = 0.0;     ///< estimate of phi(r)
  double sup_psi = 0.0;   ///< estimate of sup Psi over {Phi <= r}
  double ratio_at_zero = 0.0;
  bool heuristic = true;
  int evaluations = 0;
};

/// phi(r) = inf_{Phi(u) < r} (sup_{Phi <= r} Psi - Psi(u)) / (r - Phi(u)).
/// The inner sup comes from projected ascent onto the sublevel set, the outer
/// inf from multi-start descent of the ratio (the zero state included).
/// Throws ParameterError for r <= 0.
[[nodiscard]] VarphiEstimate estimate_varphi(const EnergyProblem& problem, double r,
                                             const VarphiOptions& opts = {});

struct GammaEstimate {
  double value = 0.0;
  bool heuristic = true;
  std::vector<VarphiEstimate> table;
};

/// Minimum of phi over the 10 largest values of the grid.
[[nodiscard]] GammaEstimate estimate_gamma(const EnergyProblem& problem,
                                           std::span<const double> r_grid,
                                           const VarphiOptions& opts = {});

/// Largest t in [0, 1] with Phi(t x) <= r (Phi is increasing along rays).
[[nodiscard]] double radial_scale(const EnergyProblem& problem, const Eigen::VectorXd& x, double r);

}  // namespace graphvar
