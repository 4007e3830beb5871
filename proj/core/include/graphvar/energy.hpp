// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphvar/graph.hpp"
#include "graphvar/models.hpp"
#include "graphvar/optimize.hpp"
#include "graphvar/spaces.hpp"

namespace graphvar {

enum class SystemKind {
  finite_poly,     ///< poly-Laplacian system on a finite graph, spaces W^{m,l}(V)
  dirichlet_poly,  ///< poly-Laplacian system on a domain with Dirichlet data
  pq_wh,           ///< (p,q)-Laplacian system in W_h^{1,l}(V) on a (truncated) graph
};

[[nodiscard]] std::string to_string(SystemKind k);
[[nodiscard]] SystemKind parse_system_kind(std::string_view name);

struct SystemSpec {
  SystemKind system = SystemKind::finite_poly;
  double p = 2.0;
  double q = 2.0;
  int m1 = 1;
  int m2 = 1;
  double lambda = 1.0;
  int arity = 2;  ///< 1 drops the second unknown
  ModelPtr model;
  std::shared_ptr<const DomainPartition> domain;  ///< dirichlet_poly only
};

/// Checks exponents, orders, lambda, arity and the potential hypotheses of
/// the chosen system. Throws ParameterError, DegenerateDomain or
/// HypothesisError.
void validate(const SystemSpec& spec, const WeightedGraph& g);

/// Full vertex vectors of a state; v is empty for arity 1.
struct State {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

/// The energy I = Phi - lambda Psi as a function of the free coordinates
/// [u on free set 1, v on free set 2].
class EnergyProblem {
 public:
  EnergyProblem(GraphPtr graph, SystemSpec spec);

  [[nodiscard]] const SystemSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const WeightedGraph& graph() const noexcept { return *graph_; }
  [[nodiscard]] const GraphPtr& graph_ptr() const noexcept { return graph_; }
  [[nodiscard]] std::size_t dimension() const noexcept;
  [[nodiscard]] std::size_t dimension_u() const noexcept { return fu_.dimension(); }
  [[nodiscard]] std::size_t dimension_v() const noexcept { return fv_ ? fv_->dimension() : 0; }

  /// Vertex set integrated by Psi: Omega for dirichlet_poly, V otherwise.
  [[nodiscard]] const std::vector<VertexIndex>& active() const noexcept { return active_; }
  [[nodiscard]] const std::vector<VertexIndex>& free_u() const noexcept { return fu_.free(); }
  [[nodiscard]] const std::vector<VertexIndex>& free_v() const;

  [[nodiscard]] const NormSpec& norm_u() const noexcept { return fu_.spec(); }
  [[nodiscard]] const NormSpec& norm_v() const;

  [[nodiscard]] State expand(const Eigen::VectorXd& coords) const;
  /// Free coordinates of a state; throws ConstraintViolation if the state is
  /// nonzero outside the free sets.
  [[nodiscard]] Eigen::VectorXd restrict(const State& s) const;

  [[nodiscard]] double phi(const Eigen::VectorXd& coords) const;
  [[nodiscard]] double psi(const Eigen::VectorXd& coords) const;
  [[nodiscard]] double energy(const Eigen::VectorXd& coords) const;

  [[nodiscard]] Eigen::VectorXd phi_gradient(const Eigen::VectorXd& coords) const;
  [[nodiscard]] Eigen::VectorXd psi_gradient(const Eigen::VectorXd& coords) const;
  [[nodiscard]] Eigen::VectorXd energy_gradient(const Eigen::VectorXd& coords) const;

  /// Energy and gradient in one pass, in the shape the optimizer expects.
  [[nodiscard]] Objective objective() const;

  /// ||u||_1 + ||v||_2 in the system's norms (unsmoothed).
  [[nodiscard]] double system_norm(const Eigen::VectorXd& coords) const;
  [[nodiscard]] double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  /// Smoothing used for channel 1 / 2 (nonzero only for exponents below 2).
  [[nodiscard]] double smoothing_u() const noexcept { return eps_u_; }

 private:
  [[nodiscard]] Eigen::VectorXd coords_u(const Eigen::VectorXd& c) const;
  [[nodiscard]] Eigen::VectorXd coords_v(const Eigen::VectorXd& c) const;

  GraphPtr graph_;
  SystemSpec spec_;
  double eps_u_ = 0.0;
  double eps_v_ = 0.0;
  NormPowerFunctional fu_;
  std::optional<NormPowerFunctional> fv_;
  NormPowerFunctional nu_;  // unsmoothed, for norms
  std::optional<NormPowerFunctional> nv_;
  std::vector<VertexIndex> active_;
};

/// M(x) = (deg(x)/2mu(x))^{e/2} mu(x) + h(x) mu(x) + sum_{y~x} (w_xy/2mu(y))^{e/2} mu(y),
/// the W_h^{1,e} norm power of the unit spike at x.
[[nodiscard]] double spike_mass(const WeightedGraph& g, VertexIndex x, double exponent, int channel);

enum class ABSource { closed_form, estimate };

[[nodiscard]] std::string to_string(ABSource s);

struct IntervalOptions {
  ABSource source = ABSource::closed_form;
  std::optional<double> A;  ///< user override, takes precedence over source
  std::optional<double> B;
  std::vector<double> radii;  ///< empty selects geometric_radii(1, 1e6, 361)
  int grid = 64;
  int rays = 16;
  NumericEmbeddingOptions embedding;
};

struct IntervalReport {
  SystemKind system = SystemKind::finite_poly;
  int arity = 2;
  double rho = 0.0;
  double K = 0.0;
  double A = 0.0;
  double B = 0.0;
  std::string ab_provenance;  ///< closed_form, oracle, estimate or user
  bool ab_heuristic = false;
  std::string k_provenance;   ///< closed_form or numeric
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  bool valid = false;

  double mu_min = 0.0;  ///< realized minimum of mu (over Omega for dirichlet)
  double h_min1 = 0.0;
  double h_min2 = 0.0;
  std::optional<std::string> x0;  ///< pq_wh: common minimizer of the spike masses
  double M1_x0 = 0.0;
  double M2_x0 = 0.0;
  double embedding_u = 0.0;  ///< dirichlet: sup-norm constants of the two spaces
  double embedding_v = 0.0;

  GrowthEstimate estimate_a;  ///< tables, when A/B were estimated
  GrowthEstimate estimate_b;
  std::vector<std::string> notes;
};

/// The admissible lambda interval of the system and every constant that
/// enters it. Throws HypothesisError when pq_wh has no vertex minimizing both
/// spike masses.
[[nodiscard]] IntervalReport interval_constants(const EnergyProblem& problem,
                                                const IntervalOptions& opts = {});

/// Vertex minimizing both M1 and M2 (ties broken by vertex order), or nullopt.
[[nodiscard]] std::optional<VertexIndex> common_mass_minimizer(const WeightedGraph& g, double p,
                                                               double q, int arity);

}  // namespace graphvar
