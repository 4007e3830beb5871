// SPDX-License-Identifier: Apache-2.0
#include "graphvar/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "graphvar/errors.hpp"
#include "graphvar/numeric.hpp"
#include "graphvar/optimize.hpp"

namespace graphvar {

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::finite_full: return "finite_full";
    case NormKind::dirichlet: return "dirichlet";
    case NormKind::wh: return "wh";
  }
  return "unknown";
}

std::string to_string(ConstantProvenance p) {
  switch (p) {
    case ConstantProvenance::closed_form: return "closed_form";
    case ConstantProvenance::numeric: return "numeric";
    case ConstantProvenance::unavailable: return "unavailable";
  }
  return "unknown";
}

void validate(const NormSpec& spec, const WeightedGraph& g) {
  if (!(spec.l > 1.0)) throw ParameterError("norm exponent l must be > 1");
  if (spec.m < 1) throw ParameterError("norm order m must be >= 1");
  if (spec.channel != 1 && spec.channel != 2) throw ParameterError("potential channel must be 1 or 2");
  switch (spec.kind) {
    case NormKind::dirichlet:
      if (!spec.domain) throw DegenerateDomain("dirichlet norm needs a domain");
      if (spec.domain->free(spec.m).empty()) {
        throw DegenerateDomain("dirichlet norm: free(m) is empty");
      }
      break;
    case NormKind::wh:
      if (spec.m != 1) throw ParameterError("W_h norms are first order (m = 1)");
      [[fallthrough]];
    case NormKind::finite_full:
      if (!(g.h_min(spec.channel) > 0.0)) {
        throw HypothesisError("potential h" + std::to_string(spec.channel) + " must be positive");
      }
      break;
  }
}

std::vector<VertexIndex> free_vertices(const NormSpec& spec, const WeightedGraph& g) {
  if (spec.kind == NormKind::dirichlet) {
    if (!spec.domain) throw DegenerateDomain("dirichlet norm needs a domain");
    return spec.domain->free(spec.m);
  }
  std::vector<VertexIndex> all(g.size());
  for (VertexIndex x = 0; x < g.size(); ++x) all[x] = x;
  return all;
}

namespace {

std::vector<VertexIndex> integration_support(const NormSpec& spec, const WeightedGraph& g) {
  if (spec.kind == NormKind::dirichlet) {
    auto s = spec.domain->stencil();
    return {s.begin(), s.end()};
  }
  std::vector<VertexIndex> all(g.size());
  for (VertexIndex x = 0; x < g.size(); ++x) all[x] = x;
  return all;
}

void check_dirichlet_support(const GraphFunction& u, const NormSpec& spec) {
  const auto free = spec.domain->free(spec.m);
  std::vector<bool> is_free(u.size(), false);
  for (VertexIndex x : free) is_free[x] = true;
  for (VertexIndex x = 0; x < u.size(); ++x) {
    if (!is_free[x] && u(x) != 0.0) {
      throw ConstraintViolation("function is nonzero at '" + u.graph().id(x) +
                                "', outside the free set of the Dirichlet space");
    }
  }
}

}  // namespace

double sobolev_norm(const GraphFunction& u, const NormSpec& spec) {
  const auto& g = u.graph();
  validate(spec, g);
  if (spec.kind == NormKind::dirichlet) check_dirichlet_support(u, spec);

  const Eigen::VectorXd grad = higher_grad_length_field(u, spec.m);
  CompensatedSum s;
  for (VertexIndex x : integration_support(spec, g)) {
    s += g.mu(x) * std::pow(grad(x), spec.l);
  }
  if (spec.kind != NormKind::dirichlet) {
    for (VertexIndex x = 0; x < g.size(); ++x) {
      s += g.mu(x) * g.h(x, spec.channel) * std::pow(std::abs(u(x)), spec.l);
    }
  }
  return std::pow(std::max(0.0, s.value()), 1.0 / spec.l);
}

NormPowerFunctional::NormPowerFunctional(GraphPtr graph, NormSpec spec, double smoothing)
    : graph_(std::move(graph)), spec_(std::move(spec)), eps_(smoothing) {
  validate(spec_, *graph_);
  free_ = free_vertices(spec_, *graph_);
  stencil_ = integration_support(spec_, *graph_);
}

Eigen::VectorXd NormPowerFunctional::expand(const Eigen::VectorXd& coords) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph_->size()));
  for (std::size_t i = 0; i < free_.size(); ++i) full(free_[i]) = coords(static_cast<Eigen::Index>(i));
  return full;
}

Eigen::VectorXd NormPowerFunctional::restrict(const Eigen::VectorXd& full) const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t i = 0; i < free_.size(); ++i) c(static_cast<Eigen::Index>(i)) = full(free_[i]);
  return c;
}

double NormPowerFunctional::value(const Eigen::VectorXd& full) const {
  const auto& g = *graph_;
  const double l = spec_.l;
  const int k = spec_.m / 2;
  Eigen::VectorXd w = full;
  for (int i = 0; i < k; ++i) w = apply_laplacian(g, w);
  const bool odd = spec_.m % 2 == 1;
  const Eigen::VectorXd sq = odd ? squared_grad_field(g, w) : Eigen::VectorXd(w.cwiseAbs2());
  const double eps2 = eps_ * eps_;
  const double eps_l = eps_ > 0.0 ? std::pow(eps_, l) : 0.0;

  CompensatedSum s;
  for (VertexIndex x : stencil_) {
    const double q = std::max(0.0, sq(x));
    s += g.mu(x) * (std::pow(q + eps2, 0.5 * l) - eps_l);
  }
  if (spec_.kind != NormKind::dirichlet) {
    for (VertexIndex x = 0; x < g.size(); ++x) {
      s += g.mu(x) * g.h(x, spec_.channel) * std::pow(std::abs(full(x)), l);
    }
  }
  return s.value() / l;
}

Eigen::VectorXd NormPowerFunctional::gradient_full(const Eigen::VectorXd& full) const {
  const auto& g = *graph_;
  const double l = spec_.l;
  const int k = spec_.m / 2;
  Eigen::VectorXd w = full;
  for (int i = 0; i < k; ++i) w = apply_laplacian(g, w);
  const double eps2 = eps_ * eps_;

  Eigen::VectorXd gw = Eigen::VectorXd::Zero(w.size());
  if (spec_.m % 2 == 1) {
    const Eigen::VectorXd sq = squared_grad_field(g, w);
    for (VertexIndex x : stencil_) {
      const double c = 0.5 * safe_pow(std::max(0.0, sq(x)) + eps2, 0.5 * (l - 2.0));
      if (c == 0.0) continue;
      for (const auto& nb : g.neighbors(x)) {
        const double t = c * nb.weight * (w(nb.index) - w(x));
        gw(nb.index) += t;
        gw(x) -= t;
      }
    }
  } else {
    for (VertexIndex x : stencil_) {
      gw(x) = g.mu(x) * safe_pow(w(x) * w(x) + eps2, 0.5 * (l - 2.0)) * w(x);
    }
  }
  for (int i = 0; i < k; ++i) gw = apply_laplacian_adjoint(g, gw);

  if (spec_.kind != NormKind::dirichlet) {
    for (VertexIndex x = 0; x < g.size(); ++x) {
      gw(x) += g.mu(x) * g.h(x, spec_.channel) * signed_pow(full(x), l - 1.0);
    }
  }
  return gw;
}

EmbeddingConstant closed_form_embedding(const WeightedGraph& g, const NormSpec& spec,
                                        double target_r) {
  validate(spec, g);
  const double l = spec.l;
  const double mu_min = g.mu_min();
  const double h_min = g.h_min(spec.channel);
  switch (spec.kind) {
    case NormKind::finite_full:
      if (std::isinf(target_r)) {
        return {std::pow(1.0 / (mu_min * h_min), 1.0 / l), ConstantProvenance::closed_form,
                "finite graph sup-norm bound K_l = (1/(mu_min h_min))^(1/l)"};
      }
      return {0.0, ConstantProvenance::unavailable, "no explicit L^r constant on finite graphs"};
    case NormKind::wh:
      if (std::isinf(target_r)) {
        return {1.0 / std::pow(h_min * mu_min, 1.0 / l), ConstantProvenance::closed_form,
                "W_h sup-norm bound 1/(h0 mu0)^(1/l)"};
      }
      if (target_r < l) {
        throw ParameterError("W_h embedding into L^r requires l <= r");
      }
      return {std::pow(mu_min, (l - target_r) / (l * target_r)) * std::pow(h_min, -1.0 / l),
              ConstantProvenance::closed_form, "W_h L^r bound mu0^((l-r)/(lr)) h0^(-1/l)"};
    case NormKind::dirichlet:
      return {0.0, ConstantProvenance::unavailable,
              "Dirichlet embedding constant has no closed form"};
  }
  return {};
}

namespace {

double sup_constant(const GraphPtr& g, const NormSpec& spec, const NumericEmbeddingOptions& opts) {
  const NormPowerFunctional norm(g, spec, spec.l < 2.0 ? 1e-12 : 0.0);
  const std::size_t n = norm.dimension();
  double best = 0.0;
  for (std::size_t pin = 0; pin < n; ++pin) {
    // Minimize (1/l)||u||^l over the remaining free coordinates with u(pin) = 1.
    auto embed = [&](const Eigen::VectorXd& rest) {
      Eigen::VectorXd coords(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0, j = 0; i < n; ++i) {
        coords(static_cast<Eigen::Index>(i)) = i == pin ? 1.0 : rest(static_cast<Eigen::Index>(j++));
      }
      return norm.expand(coords);
    };
    Objective f = [&](const Eigen::VectorXd& rest, Eigen::VectorXd* grad) {
      const Eigen::VectorXd full = embed(rest);
      if (grad) {
        const Eigen::VectorXd gf = norm.restrict(norm.gradient_full(full));
        grad->resize(rest.size());
        for (std::size_t i = 0, j = 0; i < n; ++i) {
          if (i != pin) (*grad)(static_cast<Eigen::Index>(j++)) = gf(static_cast<Eigen::Index>(i));
        }
      }
      return norm.value(full);
    };
    double min_value = 0.0;
    if (n == 1) {
      min_value = f(Eigen::VectorXd(0), nullptr);
    } else {
      DescentOptions d;
      d.tolerance = opts.tolerance;
      d.max_iterations = opts.max_iterations;
      min_value = minimize(f, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n - 1)), d).value;
    }
    const double min_norm = std::pow(spec.l * min_value, 1.0 / spec.l);
    best = std::max(best, 1.0 / min_norm);
  }
  return best;
}

double lr_constant(const GraphPtr& g, const NormSpec& spec, double r,
                   const NumericEmbeddingOptions& opts) {
  const NormPowerFunctional norm(g, spec, spec.l < 2.0 ? 1e-12 : 0.0);
  const auto& free = norm.free();
  const std::size_t n = free.size();
  const auto& graph = *g;

  auto ratio = [&](const Eigen::VectorXd& coords) {
    const Eigen::VectorXd full = norm.expand(coords);
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
      s += graph.mu(free[i]) * std::pow(std::abs(coords(static_cast<Eigen::Index>(i))), r);
    }
    const double target = std::pow(s.value(), 1.0 / r);
    const double base = std::pow(spec.l * norm.value(full), 1.0 / spec.l);
    return target / base;
  };

  // Minimize log||u||_spec - log||u||_r; the objective is scale invariant.
  Objective f = [&](const Eigen::VectorXd& coords, Eigen::VectorXd* grad) {
    const Eigen::VectorXd full = norm.expand(coords);
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
      s += graph.mu(free[i]) * std::pow(std::abs(coords(static_cast<Eigen::Index>(i))), r);
    }
    const double lr_pow = s.value();
    const double np = norm.value(full);
    if (grad) {
      const Eigen::VectorXd gn = norm.restrict(norm.gradient_full(full));
      grad->resize(coords.size());
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double d_lr = graph.mu(free[i]) * signed_pow(coords(ii), r - 1.0) / lr_pow;
        (*grad)(ii) = gn(ii) / (spec.l * np) - d_lr;
      }
    }
    return std::log(spec.l * np) / spec.l - std::log(lr_pow) / r;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Eigen::VectorXd> starts;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    starts.push_back(e);
  }
  for (int k = 0; k < opts.restarts; ++k) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = unit(rng);
    starts.push_back(v);
  }

  DescentOptions d;
  d.tolerance = opts.tolerance;
  d.max_iterations = opts.max_iterations;
  double best = 0.0;
  for (auto& x0 : starts) {
    best = std::max(best, ratio(x0));
    auto res = minimize(f, x0, d);
    if (std::isfinite(res.value) && res.x.norm() > 0.0) best = std::max(best, ratio(res.x));
  }
  return best;
}

}  // namespace

EmbeddingConstant numeric_embedding(const GraphPtr& g, const NormSpec& spec, double target_r,
                                    const NumericEmbeddingOptions& opts) {
  validate(spec, *g);
  if (!(target_r >= 1.0)) throw ParameterError("embedding target needs r >= 1");
  if (spec.kind == NormKind::wh && !std::isinf(target_r) && target_r < spec.l) {
    throw ParameterError("W_h embedding into L^r requires l <= r");
  }
  const double value =
      std::isinf(target_r) ? sup_constant(g, spec, opts) : lr_constant(g, spec, target_r, opts);
  return {value, ConstantProvenance::numeric, "finite-dimensional best constant"};
}

EmbeddingConstant embedding_constant(const GraphPtr& g, const NormSpec& spec, double target_r,
                                     EmbeddingBranch branch, const NumericEmbeddingOptions& opts) {
  if (branch == EmbeddingBranch::closed_form) return closed_form_embedding(*g, spec, target_r);
  return numeric_embedding(g, spec, target_r, opts);
}

}  // namespace graphvar
