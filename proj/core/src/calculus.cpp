// SPDX-License-Identifier: Apache-2.0
#include "graphvar/calculus.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "graphvar/errors.hpp"
#include "graphvar/numeric.hpp"

namespace graphvar {

namespace {

std::vector<VertexIndex> all_vertices(const WeightedGraph& g) {
  std::vector<VertexIndex> out(g.size());
  for (VertexIndex x = 0; x < g.size(); ++x) out[x] = x;
  return out;
}

void require_vertex(const WeightedGraph& g, VertexIndex x) {
  if (x >= g.size()) throw LookupError("vertex index out of range");
}

double gamma_at(const WeightedGraph& g, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                VertexIndex x) {
  CompensatedSum s;
  for (const auto& nb : g.neighbors(x)) {
    s += nb.weight * (u(nb.index) - u(x)) * (v(nb.index) - v(x));
  }
  return s.value() / (2.0 * g.mu(x));
}

}  // namespace

GraphFunction::GraphFunction(GraphPtr graph, Eigen::VectorXd values)
    : graph_(std::move(graph)), values_(std::move(values)) {
  if (!graph_) throw BindingError("graph function without a graph");
  if (static_cast<std::size_t>(values_.size()) != graph_->size()) {
    throw BindingError("graph function length does not match the vertex count");
  }
  if (!values_.allFinite()) throw ParameterError("graph function has non-finite entries");
}

GraphFunction GraphFunction::zeros(GraphPtr graph) {
  const auto n = static_cast<Eigen::Index>(graph->size());
  return {std::move(graph), Eigen::VectorXd::Zero(n)};
}

GraphFunction GraphFunction::constant(GraphPtr graph, double c) {
  const auto n = static_cast<Eigen::Index>(graph->size());
  return {std::move(graph), Eigen::VectorXd::Constant(n, c)};
}

GraphFunction GraphFunction::spike(GraphPtr graph, VertexIndex x, double c) {
  require_vertex(*graph, x);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph->size()));
  v(static_cast<Eigen::Index>(x)) = c;
  return {std::move(graph), std::move(v)};
}

void require_same_binding(const GraphFunction& u, const GraphFunction& v) {
  if (!u.same_binding(v)) throw BindingError("graph functions are bound to different graphs");
}

Eigen::VectorXd apply_laplacian(const WeightedGraph& g, const Eigen::VectorXd& w) {
  Eigen::VectorXd out(w.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    CompensatedSum s;
    for (const auto& nb : g.neighbors(x)) s += nb.weight * (w(nb.index) - w(x));
    out(x) = s.value() / g.mu(x);
  }
  return out;
}

Eigen::VectorXd apply_laplacian_adjoint(const WeightedGraph& g, const Eigen::VectorXd& z) {
  Eigen::VectorXd out(z.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    const double zx = z(x) / g.mu(x);
    CompensatedSum s;
    for (const auto& nb : g.neighbors(x)) s += nb.weight * (z(nb.index) / g.mu(nb.index) - zx);
    out(x) = s.value();
  }
  return out;
}

Eigen::VectorXd squared_grad_field(const WeightedGraph& g, const Eigen::VectorXd& w) {
  Eigen::VectorXd out(w.size());
  for (VertexIndex x = 0; x < g.size(); ++x) out(x) = gamma_at(g, w, w, x);
  return out;
}

double directional_derivative(const GraphFunction& u, VertexIndex x, VertexIndex y) {
  const auto& g = u.graph();
  require_vertex(g, x);
  require_vertex(g, y);
  auto w = g.weight(x, y);
  if (!w) throw AdjacencyError("vertices '" + g.id(x) + "' and '" + g.id(y) + "' are not adjacent");
  return (u(x) - u(y)) * std::sqrt(*w / g.mu(x)) / std::sqrt(2.0);
}

double gamma(const GraphFunction& u, const GraphFunction& v, VertexIndex x) {
  require_same_binding(u, v);
  require_vertex(u.graph(), x);
  return gamma_at(u.graph(), u.values(), v.values(), x);
}

double grad_length(const GraphFunction& u, VertexIndex x) {
  require_vertex(u.graph(), x);
  // Gamma(u,u) is a sum of squares; clamp rounding noise.
  return std::sqrt(std::max(0.0, gamma_at(u.graph(), u.values(), u.values(), x)));
}

GraphFunction laplacian(const GraphFunction& u) {
  return {u.graph_ptr(), apply_laplacian(u.graph(), u.values())};
}

GraphFunction laplacian_power(const GraphFunction& u, int k) {
  if (k < 0) throw ParameterError("laplacian power must be non-negative");
  Eigen::VectorXd w = u.values();
  for (int i = 0; i < k; ++i) w = apply_laplacian(u.graph(), w);
  return {u.graph_ptr(), std::move(w)};
}

Eigen::VectorXd higher_grad_length_field(const GraphFunction& u, int m) {
  if (m < 1) throw ParameterError("gradient order m must be >= 1");
  const auto& g = u.graph();
  Eigen::VectorXd w = u.values();
  for (int i = 0; i < m / 2; ++i) w = apply_laplacian(g, w);
  if (m % 2 == 0) return w.cwiseAbs();
  return squared_grad_field(g, w).cwiseMax(0.0).cwiseSqrt();
}

double higher_grad_length(const GraphFunction& u, int m, VertexIndex x) {
  require_vertex(u.graph(), x);
  return higher_grad_length_field(u, m)(static_cast<Eigen::Index>(x));
}

GraphFunction p_laplacian(const GraphFunction& u, double l) {
  if (!(l > 1.0)) throw ParameterError("l-Laplacian needs l > 1");
  const auto& g = u.graph();
  const Eigen::VectorXd& val = u.values();
  const Eigen::VectorXd grad = squared_grad_field(g, val).cwiseMax(0.0).cwiseSqrt();
  Eigen::VectorXd factor(grad.size());
  for (Eigen::Index i = 0; i < grad.size(); ++i) factor(i) = safe_pow(grad(i), l - 2.0);

  Eigen::VectorXd out(val.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    CompensatedSum s;
    for (const auto& nb : g.neighbors(x)) {
      const double diff = val(nb.index) - val(x);
      if (diff == 0.0) continue;
      s += (factor(nb.index) + factor(x)) * nb.weight * diff;
    }
    out(x) = s.value() / (2.0 * g.mu(x));
  }
  return {u.graph_ptr(), std::move(out)};
}

double weak_poly_pairing(const GraphFunction& u, const GraphFunction& phi, int m, double l,
                         std::span<const VertexIndex> support) {
  require_same_binding(u, phi);
  if (m < 1) throw ParameterError("gradient order m must be >= 1");
  if (!(l > 1.0)) throw ParameterError("exponent l must be > 1");
  const auto& g = u.graph();
  const int k = m / 2;
  Eigen::VectorXd wu = u.values();
  Eigen::VectorXd wp = phi.values();
  for (int i = 0; i < k; ++i) {
    wu = apply_laplacian(g, wu);
    wp = apply_laplacian(g, wp);
  }

  CompensatedSum s;
  for (VertexIndex x : support) {
    require_vertex(g, x);
    double length = 0.0;
    double paired = 0.0;
    if (m % 2 == 0) {
      length = std::abs(wu(x));
      paired = wu(x) * wp(x);
    } else {
      length = std::sqrt(std::max(0.0, gamma_at(g, wu, wu, x)));
      paired = gamma_at(g, wu, wp, x);
    }
    s += g.mu(x) * safe_pow(length, l - 2.0) * paired;
  }
  return s.value();
}

double weak_poly_pairing(const GraphFunction& u, const GraphFunction& phi, int m, double l) {
  const auto all = all_vertices(u.graph());
  return weak_poly_pairing(u, phi, m, l, all);
}

double integrate(const GraphFunction& u, std::span<const VertexIndex> over) {
  const auto& g = u.graph();
  CompensatedSum s;
  for (VertexIndex x : over) {
    require_vertex(g, x);
    s += g.mu(x) * u(x);
  }
  return s.value();
}

double integrate(const GraphFunction& u) {
  const auto all = all_vertices(u.graph());
  return integrate(u, all);
}

double lr_norm(const GraphFunction& u, double r, std::span<const VertexIndex> over) {
  if (!(r >= 1.0)) throw ParameterError("L^r norm needs r >= 1");
  const auto& g = u.graph();
  if (std::isinf(r)) {
    double m = 0.0;
    for (VertexIndex x : over) {
      require_vertex(g, x);
      m = std::max(m, std::abs(u(x)));
    }
    return m;
  }
  CompensatedSum s;
  for (VertexIndex x : over) {
    require_vertex(g, x);
    s += g.mu(x) * std::pow(std::abs(u(x)), r);
  }
  return std::pow(s.value(), 1.0 / r);
}

double lr_norm(const GraphFunction& u, double r) {
  const auto all = all_vertices(u.graph());
  return lr_norm(u, r, all);
}

}  // namespace graphvar
