// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphvar/calculus.hpp"
#include "graphvar/graph.hpp"

namespace graphvar {

enum class NormKind {
  finite_full,  ///< W^{m,l}(V): (int_V |grad^m u|^l + h|u|^l dmu)^{1/l}
  dirichlet,    ///< W_0^{m,l}(Omega): (int_{Omega u dOmega} |grad^m u|^l dmu)^{1/l}
  wh,           ///< W_h^{1,l}(V): (int_V |grad u|^l + h|u|^l dmu)^{1/l}
};

[[nodiscard]] std::string to_string(NormKind k);

struct NormSpec {
  NormKind kind = NormKind::finite_full;
  int m = 1;
  double l = 2.0;
  int channel = 1;  ///< which potential (h1 or h2) enters the norm
  std::shared_ptr<const DomainPartition> domain;  ///< required for dirichlet
};

/// Checks the structural requirements of `spec` on `g`: l > 1, m >= 1,
/// m == 1 for wh, a domain with non-empty free(m) for dirichlet, and
/// positive potentials where a potential enters the norm.
void validate(const NormSpec& spec, const WeightedGraph& g);

/// Vertices carrying the free coordinates of the space: all of V, or free(m)
/// of the domain.
[[nodiscard]] std::vector<VertexIndex> free_vertices(const NormSpec& spec, const WeightedGraph& g);

/// The norm of `u` in the space described by `spec`. In dirichlet mode u
/// must vanish outside free(m); otherwise ConstraintViolation is thrown.
[[nodiscard]] double sobolev_norm(const GraphFunction& u, const NormSpec& spec);

/// (1/l) ||u||^l as a smooth function of the free coordinates, with its
/// gradient. For l < 2 the gradient-length terms may be regularized as
/// (|grad^m u|^2 + eps^2)^{l/2} - eps^l, which keeps the value at zero
/// equal to zero.
class NormPowerFunctional {
 public:
  NormPowerFunctional(GraphPtr graph, NormSpec spec, double smoothing = 0.0);

  [[nodiscard]] const NormSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const std::vector<VertexIndex>& free() const noexcept { return free_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return free_.size(); }
  [[nodiscard]] const std::vector<VertexIndex>& stencil() const noexcept { return stencil_; }

  /// Zero extension of free coordinates to a full vertex vector.
  [[nodiscard]] Eigen::VectorXd expand(const Eigen::VectorXd& coords) const;
  /// Free coordinates of a full vertex vector (no constraint check).
  [[nodiscard]] Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;

  /// (1/l)||u||^l for a full vertex vector.
  [[nodiscard]] double value(const Eigen::VectorXd& full) const;
  /// Gradient of value() with respect to every vertex value.
  [[nodiscard]] Eigen::VectorXd gradient_full(const Eigen::VectorXd& full) const;

 private:
  GraphPtr graph_;
  NormSpec spec_;
  double eps_;
  std::vector<VertexIndex> free_;
  std::vector<VertexIndex> stencil_;
};

enum class ConstantProvenance { closed_form, numeric, unavailable };

[[nodiscard]] std::string to_string(ConstantProvenance p);

struct EmbeddingConstant {
  double value = 0.0;
  ConstantProvenance provenance = ConstantProvenance::unavailable;
  std::string source;  ///< which bound produced a closed form
};

/// The explicit constants: for the sup-norm target, (1/(mu_min h_min))^{1/l}
/// on finite graphs and 1/(h0 mu0)^{1/l} in W_h mode; for an L^r target in W_h
/// mode, mu0^{(l-r)/(lr)} h0^{-1/l}. Dirichlet constants have no closed form
/// and report `unavailable`, as do L^r targets on finite graphs. Throws
/// ParameterError for a W_h L^r target with r < l.
[[nodiscard]] EmbeddingConstant closed_form_embedding(const WeightedGraph& g, const NormSpec& spec,
                                                      double target_r);

struct NumericEmbeddingOptions {
  int restarts = 20;
  std::uint64_t seed = 1;
  double tolerance = 1e-11;
  int max_iterations = 1000;  ///< per start; the result is the best ratio seen
};

/// The best constant sup_{u != 0} ||u||_{target} / ||u||_spec over the free
/// coordinates. For the sup-norm target this is max_x 1 / min{||u|| : u(x) = 1},
/// each inner problem being convex. For finite r the ratio is maximized by
/// multi-start ascent seeded with every basis spike and `restarts` random states.
[[nodiscard]] EmbeddingConstant numeric_embedding(const GraphPtr& g, const NormSpec& spec,
                                                  double target_r,
                                                  const NumericEmbeddingOptions& opts = {});

enum class EmbeddingBranch { closed_form, numeric };

[[nodiscard]] EmbeddingConstant embedding_constant(const GraphPtr& g, const NormSpec& spec,
                                                   double target_r, EmbeddingBranch branch,
                                                   const NumericEmbeddingOptions& opts = {});

}  // namespace graphvar
