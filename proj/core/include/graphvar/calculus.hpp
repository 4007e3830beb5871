// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <limits>
#include <span>
#include <string_view>

#include "graphvar/graph.hpp"

namespace graphvar {

/// A real value per vertex, bound to the graph whose ordering defines the
/// layout. Entries are finite on construction.
class GraphFunction {
 public:
  GraphFunction(GraphPtr graph, Eigen::VectorXd values);

  [[nodiscard]] static GraphFunction zeros(GraphPtr graph);
  [[nodiscard]] static GraphFunction constant(GraphPtr graph, double c);
  /// c at x, zero elsewhere.
  [[nodiscard]] static GraphFunction spike(GraphPtr graph, VertexIndex x, double c);

  [[nodiscard]] const WeightedGraph& graph() const noexcept { return *graph_; }
  [[nodiscard]] const GraphPtr& graph_ptr() const noexcept { return graph_; }
  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(values_.size());
  }

  [[nodiscard]] double operator()(VertexIndex x) const { return values_(static_cast<Eigen::Index>(x)); }
  [[nodiscard]] double at(std::string_view id) const { return (*this)(graph_->index(id)); }

  [[nodiscard]] bool same_binding(const GraphFunction& other) const noexcept {
    return graph_.get() == other.graph_.get();
  }

  [[nodiscard]] GraphFunction scaled(double c) const { return {graph_, c * values_}; }

 private:
  GraphPtr graph_;
  Eigen::VectorXd values_;
};

/// Throws BindingError unless u and v share a graph.
void require_same_binding(const GraphFunction& u, const GraphFunction& v);

// Pointwise operators --------------------------------------------------------

/// D_{w,y}u(x) = (u(x) - u(y)) sqrt(w_xy / mu(x)) / sqrt(2). Throws
/// AdjacencyError when x and y are not adjacent.
[[nodiscard]] double directional_derivative(const GraphFunction& u, VertexIndex x, VertexIndex y);

/// Gamma(u,v)(x) = (1 / 2mu(x)) sum_{y~x} w_xy (u(y)-u(x)) (v(y)-v(x)).
[[nodiscard]] double gamma(const GraphFunction& u, const GraphFunction& v, VertexIndex x);

/// |grad u|(x) = sqrt(Gamma(u,u)(x)).
[[nodiscard]] double grad_length(const GraphFunction& u, VertexIndex x);

/// (Delta u)(x) = (1/mu(x)) sum_{y~x} w_xy (u(y) - u(x)).
[[nodiscard]] GraphFunction laplacian(const GraphFunction& u);

/// Delta applied k times (k = 0 returns u).
[[nodiscard]] GraphFunction laplacian_power(const GraphFunction& u, int k);

/// |grad^m u|(x): |grad Delta^{(m-1)/2} u| for odd m, |Delta^{m/2} u| for even m.
/// Throws ParameterError for m < 1.
[[nodiscard]] double higher_grad_length(const GraphFunction& u, int m, VertexIndex x);

/// |grad^m u| at every vertex.
[[nodiscard]] Eigen::VectorXd higher_grad_length_field(const GraphFunction& u, int m);

/// The l-Laplacian
///   (Delta_l u)(x) = (1/2mu(x)) sum_{y~x} (|grad u|^{l-2}(y) + |grad u|^{l-2}(x)) w_xy (u(y)-u(x)).
/// Terms whose difference u(y)-u(x) vanishes contribute 0, which fixes the
/// meaning of 0^{l-2} for l < 2. Throws ParameterError for l <= 1.
[[nodiscard]] GraphFunction p_laplacian(const GraphFunction& u, double l);

/// Weak form of the poly-Laplacian tested against phi:
///   odd m:  int |grad^m u|^{l-2} Gamma(Delta^k u, Delta^k phi) dmu, k = (m-1)/2
///   even m: int |grad^m u|^{l-2} Delta^{m/2}u Delta^{m/2}phi dmu
/// over the whole vertex set, or over `support` when given.
[[nodiscard]] double weak_poly_pairing(const GraphFunction& u, const GraphFunction& phi, int m,
                                       double l);
[[nodiscard]] double weak_poly_pairing(const GraphFunction& u, const GraphFunction& phi, int m,
                                       double l, std::span<const VertexIndex> support);

/// sum_{x in over} mu(x) u(x); the whole vertex set when `over` is omitted.
[[nodiscard]] double integrate(const GraphFunction& u);
[[nodiscard]] double integrate(const GraphFunction& u, std::span<const VertexIndex> over);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum mu |u|^r)^{1/r}, or max |u| over the set for r = kInfinity.
/// Throws ParameterError for r < 1.
[[nodiscard]] double lr_norm(const GraphFunction& u, double r);
[[nodiscard]] double lr_norm(const GraphFunction& u, double r, std::span<const VertexIndex> over);

// Vector-level kernels shared by the energy and diagnostics code --------------

/// Delta w for a raw vertex vector.
[[nodiscard]] Eigen::VectorXd apply_laplacian(const WeightedGraph& g, const Eigen::VectorXd& w);

/// Transpose of Delta with respect to the Euclidean inner product:
/// (Delta^T z)(x) = sum_{y~x} w_xy (z(y)/mu(y) - z(x)/mu(x)).
[[nodiscard]] Eigen::VectorXd apply_laplacian_adjoint(const WeightedGraph& g,
                                                      const Eigen::VectorXd& z);

/// Gamma(w,w) at every vertex.
[[nodiscard]] Eigen::VectorXd squared_grad_field(const WeightedGraph& g, const Eigen::VectorXd& w);

}  // namespace graphvar
