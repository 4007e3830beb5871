// SPDX-License-Identifier: Apache-2.0
#include "graphvar/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "graphvar/errors.hpp"
#include "graphvar/numeric.hpp"

namespace graphvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smoothing parameter for exponents in (1, 2), where |grad u|^{l-2} blows up.
constexpr double kSmoothing = 1e-12;

double smoothing_for(double l) { return l < 2.0 ? kSmoothing : 0.0; }

NormSpec channel_norm(const SystemSpec& spec, int channel) {
  NormSpec n;
  n.channel = channel;
  n.l = channel == 1 ? spec.p : spec.q;
  n.m = channel == 1 ? spec.m1 : spec.m2;
  switch (spec.system) {
    case SystemKind::finite_poly: n.kind = NormKind::finite_full; break;
    case SystemKind::dirichlet_poly:
      n.kind = NormKind::dirichlet;
      n.domain = spec.domain;
      break;
    case SystemKind::pq_wh: n.kind = NormKind::wh; break;
  }
  return n;
}

const SystemSpec& checked(const SystemSpec& spec, const GraphPtr& g) {
  if (!g) throw ParameterError("energy problem needs a graph");
  validate(spec, *g);
  return spec;
}

}  // namespace

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::finite_poly: return "finite_poly";
    case SystemKind::dirichlet_poly: return "dirichlet_poly";
    case SystemKind::pq_wh: return "pq_wh";
  }
  return "unknown";
}

SystemKind parse_system_kind(std::string_view name) {
  if (name == "finite_poly") return SystemKind::finite_poly;
  if (name == "dirichlet_poly") return SystemKind::dirichlet_poly;
  if (name == "pq_wh") return SystemKind::pq_wh;
  throw ParseError("unknown system '" + std::string(name) +
                   "' (expected finite_poly, dirichlet_poly or pq_wh)");
}

std::string to_string(ABSource s) {
  return s == ABSource::closed_form ? "closed_form" : "estimate";
}

void validate(const SystemSpec& spec, const WeightedGraph& g) {
  if (spec.arity != 1 && spec.arity != 2) throw ParameterError("arity must be 1 or 2");
  if (!(spec.p > 1.0) || (spec.arity == 2 && !(spec.q > 1.0))) {
    throw ParameterError("exponents p and q must exceed 1");
  }
  if (spec.m1 < 1 || (spec.arity == 2 && spec.m2 < 1)) {
    throw ParameterError("orders m1 and m2 must be >= 1");
  }
  if (!(spec.lambda >= 0.0) || !std::isfinite(spec.lambda)) {
    throw ParameterError("lambda must be finite and nonnegative");
  }
  if (!spec.model) throw ParameterError("system needs a nonlinearity model");
  if (spec.arity == 2 && spec.model->arity() == 1) {
    throw ParameterError("a scalar nonlinearity cannot drive a two-component system");
  }
  switch (spec.system) {
    case SystemKind::finite_poly:
      if (!(g.h_min(1) > 0.0) || (spec.arity == 2 && !(g.h_min(2) > 0.0))) {
        throw HypothesisError("finite-graph systems need h_i(x) > 0 at every vertex");
      }
      break;
    case SystemKind::dirichlet_poly:
      if (!spec.domain) throw DegenerateDomain("dirichlet_poly needs a domain (omega)");
      if (spec.domain->interior().empty()) throw DegenerateDomain("domain interior is empty");
      if (spec.domain->free(spec.m1).empty() ||
          (spec.arity == 2 && spec.domain->free(spec.m2).empty())) {
        throw DegenerateDomain("no free vertices remain after the Dirichlet collar");
      }
      break;
    case SystemKind::pq_wh:
      if (spec.p < 2.0 || (spec.arity == 2 && spec.q < 2.0)) {
        throw ParameterError("pq_wh requires p >= 2 and q >= 2");
      }
      if (spec.m1 != 1 || (spec.arity == 2 && spec.m2 != 1)) {
        throw ParameterError("pq_wh is first order (m1 = m2 = 1)");
      }
      g.validate_potentials(PotentialMode::wh);
      break;
  }
}

// EnergyProblem -------------------------------------------------------------------

EnergyProblem::EnergyProblem(GraphPtr graph, SystemSpec spec)
    : graph_(std::move(graph)),
      spec_(checked(spec, graph_)),
      eps_u_(smoothing_for(spec_.p)),
      eps_v_(smoothing_for(spec_.q)),
      fu_(graph_, channel_norm(spec_, 1), eps_u_),
      nu_(graph_, channel_norm(spec_, 1), 0.0) {
  if (spec_.arity == 2) {
    fv_.emplace(graph_, channel_norm(spec_, 2), eps_v_);
    nv_.emplace(graph_, channel_norm(spec_, 2), 0.0);
  }
  if (spec_.system == SystemKind::dirichlet_poly) {
    auto om = spec_.domain->omega();
    active_.assign(om.begin(), om.end());
  } else {
    active_.resize(graph_->size());
    for (VertexIndex x = 0; x < graph_->size(); ++x) active_[x] = x;
  }
  check_model_registration(*spec_.model, *graph_, active_);
}

std::size_t EnergyProblem::dimension() const noexcept { return dimension_u() + dimension_v(); }

const std::vector<VertexIndex>& EnergyProblem::free_v() const {
  if (!fv_) throw ParameterError("scalar system has no second component");
  return fv_->free();
}

const NormSpec& EnergyProblem::norm_v() const {
  if (!fv_) throw ParameterError("scalar system has no second component");
  return fv_->spec();
}

Eigen::VectorXd EnergyProblem::coords_u(const Eigen::VectorXd& c) const {
  return c.head(static_cast<Eigen::Index>(dimension_u()));
}

Eigen::VectorXd EnergyProblem::coords_v(const Eigen::VectorXd& c) const {
  return c.tail(static_cast<Eigen::Index>(dimension_v()));
}

State EnergyProblem::expand(const Eigen::VectorXd& coords) const {
  if (static_cast<std::size_t>(coords.size()) != dimension()) {
    throw ParameterError("coordinate vector has the wrong dimension");
  }
  State s;
  s.u = fu_.expand(coords_u(coords));
  if (fv_) s.v = fv_->expand(coords_v(coords));
  return s;
}

Eigen::VectorXd EnergyProblem::restrict(const State& s) const {
  const auto n = static_cast<Eigen::Index>(graph_->size());
  if (s.u.size() != n || (fv_ && s.v.size() != n)) {
    throw ParameterError("state vectors must have one entry per vertex");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(dimension()));
  out.head(static_cast<Eigen::Index>(dimension_u())) = fu_.restrict(s.u);
  if (fv_) out.tail(static_cast<Eigen::Index>(dimension_v())) = fv_->restrict(s.v);
  const State back = expand(out);
  for (Eigen::Index x = 0; x < n; ++x) {
    const bool bad_u = back.u(x) != s.u(x);
    const bool bad_v = fv_ && back.v(x) != s.v(x);
    if (bad_u || bad_v) {
      throw ConstraintViolation("state is nonzero at '" + graph_->id(static_cast<VertexIndex>(x)) +
                                "', outside the free set of its space");
    }
  }
  return out;
}

double EnergyProblem::phi(const Eigen::VectorXd& coords) const {
  const State s = expand(coords);
  double val = fu_.value(s.u);
  if (fv_) val += fv_->value(s.v);
  return val;
}

double EnergyProblem::psi(const Eigen::VectorXd& coords) const {
  const State s = expand(coords);
  const auto& F = *spec_.model;
  CompensatedSum sum;
  for (VertexIndex x : active_) {
    const double t = fv_ ? s.v(static_cast<Eigen::Index>(x)) : 0.0;
    sum += graph_->mu(x) * F.value(x, s.u(static_cast<Eigen::Index>(x)), t);
  }
  return sum.value();
}

double EnergyProblem::energy(const Eigen::VectorXd& coords) const {
  return phi(coords) - spec_.lambda * psi(coords);
}

Eigen::VectorXd EnergyProblem::phi_gradient(const Eigen::VectorXd& coords) const {
  const State s = expand(coords);
  Eigen::VectorXd g(static_cast<Eigen::Index>(dimension()));
  g.head(static_cast<Eigen::Index>(dimension_u())) = fu_.restrict(fu_.gradient_full(s.u));
  if (fv_) g.tail(static_cast<Eigen::Index>(dimension_v())) = fv_->restrict(fv_->gradient_full(s.v));
  return g;
}

Eigen::VectorXd EnergyProblem::psi_gradient(const Eigen::VectorXd& coords) const {
  const State s = expand(coords);
  const auto& F = *spec_.model;
  std::vector<bool> is_active(graph_->size(), false);
  for (VertexIndex x : active_) is_active[x] = true;

  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
  const auto& fu = fu_.free();
  for (std::size_t i = 0; i < fu.size(); ++i) {
    const VertexIndex x = fu[i];
    if (!is_active[x]) continue;
    const auto xi = static_cast<Eigen::Index>(x);
    const double t = fv_ ? s.v(xi) : 0.0;
    g(static_cast<Eigen::Index>(i)) = graph_->mu(x) * F.ds(x, s.u(xi), t);
  }
  if (fv_) {
    const auto& fv = fv_->free();
    const auto off = static_cast<Eigen::Index>(dimension_u());
    for (std::size_t i = 0; i < fv.size(); ++i) {
      const VertexIndex x = fv[i];
      if (!is_active[x]) continue;
      const auto xi = static_cast<Eigen::Index>(x);
      g(off + static_cast<Eigen::Index>(i)) = graph_->mu(x) * F.dt(x, s.u(xi), s.v(xi));
    }
  }
  return g;
}

Eigen::VectorXd EnergyProblem::energy_gradient(const Eigen::VectorXd& coords) const {
  return phi_gradient(coords) - spec_.lambda * psi_gradient(coords);
}

Objective EnergyProblem::objective() const {
  return [this](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    if (grad) *grad = energy_gradient(x);
    return energy(x);
  };
}

double EnergyProblem::system_norm(const Eigen::VectorXd& coords) const {
  const State s = expand(coords);
  double n = std::pow(std::max(0.0, spec_.p * nu_.value(s.u)), 1.0 / spec_.p);
  if (nv_) n += std::pow(std::max(0.0, spec_.q * nv_->value(s.v)), 1.0 / spec_.q);
  return n;
}

double EnergyProblem::distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return system_norm(a - b);
}

// Constants -----------------------------------------------------------------------

double spike_mass(const WeightedGraph& g, VertexIndex x, double exponent, int channel) {
  if (x >= g.size()) throw LookupError("vertex index out of range");
  const double half = 0.5 * exponent;
  const double mx = g.mu(x);
  CompensatedSum s;
  s += std::pow(degree(g, x) / (2.0 * mx), half) * mx;
  s += g.h(x, channel) * mx;
  for (const auto& nb : g.neighbors(x)) {
    const double my = g.mu(nb.index);
    s += std::pow(nb.weight / (2.0 * my), half) * my;
  }
  return s.value();
}

namespace {

// Minimizers within a relative tolerance, so roundoff does not split ties.
std::vector<bool> minimizers(const std::vector<double>& m) {
  const double best = *std::min_element(m.begin(), m.end());
  std::vector<bool> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] <= best + 1e-12 * std::abs(best);
  return out;
}

std::vector<double> masses(const WeightedGraph& g, double e, int channel) {
  std::vector<double> m(g.size());
  for (VertexIndex x = 0; x < g.size(); ++x) m[x] = spike_mass(g, x, e, channel);
  return m;
}

}  // namespace

std::optional<VertexIndex> common_mass_minimizer(const WeightedGraph& g, double p, double q,
                                                 int arity) {
  const auto min1 = minimizers(masses(g, p, 1));
  std::vector<bool> min2(g.size(), true);
  if (arity == 2) min2 = minimizers(masses(g, q, 2));
  for (VertexIndex x = 0; x < g.size(); ++x) {
    if (min1[x] && min2[x]) return x;
  }
  return std::nullopt;
}

namespace {

std::string mass_scan(const WeightedGraph& g, double p, double q, int arity) {
  const auto m1 = masses(g, p, 1);
  const auto m2 = arity == 2 ? masses(g, q, 2) : std::vector<double>{};
  const auto a1 = std::min_element(m1.begin(), m1.end()) - m1.begin();
  std::ostringstream ss;
  ss.precision(12);
  ss << "M1 is minimized at '" << g.id(static_cast<VertexIndex>(a1)) << "' (" << m1[a1] << ")";
  if (arity == 2) {
    const auto a2 = std::min_element(m2.begin(), m2.end()) - m2.begin();
    ss << ", M2 at '" << g.id(static_cast<VertexIndex>(a2)) << "' (" << m2[a2] << ")";
    ss << "; at those vertices M2='" << m2[a1] << "', M1='" << m1[a2] << "'";
  }
  return ss.str();
}

void fill_growth(IntervalReport& r, const EnergyProblem& prob, const IntervalOptions& opts) {
  const auto& spec = prob.spec();
  const auto& g = prob.graph();
  const auto& F = *spec.model;
  if (opts.A.has_value() != opts.B.has_value()) {
    throw ParameterError("user growth constants need both A and B");
  }
  if (opts.A) {
    r.A = *opts.A;
    r.B = *opts.B;
    r.ab_provenance = "user";
    return;
  }
  if (opts.source == ABSource::closed_form) {
    if (auto t = F.growth_targets(g, prob.active(), spec.p, spec.q, spec.arity)) {
      r.A = t->A;
      r.B = t->B;
      r.ab_provenance = t->provenance;
      return;
    }
    r.notes.push_back("model '" + F.name() +
                      "' has no closed-form A/B for these exponents; estimated instead");
  }
  const double delta = spec.arity == 1 ? spec.p : std::min(spec.p, spec.q);
  const std::vector<double> radii =
      opts.radii.empty() ? geometric_radii(1.0, 1e6, 361) : opts.radii;
  r.estimate_a = estimate_A(F, g, prob.active(), delta, radii, opts.grid);
  r.estimate_b = estimate_B(F, g, prob.active(), spec.p, spec.arity == 1 ? spec.p : spec.q,
                            default_rays(opts.rays), radii);
  r.A = r.estimate_a.estimate;
  r.B = r.estimate_b.estimate;
  r.ab_provenance = "estimate";
  r.ab_heuristic = true;
}

}  // namespace

IntervalReport interval_constants(const EnergyProblem& prob, const IntervalOptions& opts) {
  const auto& spec = prob.spec();
  const auto& g = prob.graph();
  const bool scalar = spec.arity == 1;
  const double p = spec.p;
  const double q = spec.q;

  IntervalReport r;
  r.system = spec.system;
  r.arity = spec.arity;
  r.h_min1 = g.h_min(1);
  r.h_min2 = scalar ? 0.0 : g.h_min(2);

  switch (spec.system) {
    case SystemKind::finite_poly: {
      r.mu_min = g.mu_min();
      CompensatedSum ih1, ih2;
      for (VertexIndex x = 0; x < g.size(); ++x) {
        ih1 += g.mu(x) * g.h1(x);
        ih2 += g.mu(x) * g.h2(x);
      }
      r.rho = ih1.value() / p;
      r.K = 1.0 / (r.mu_min * r.h_min1);
      if (!scalar) {
        r.rho = std::max(r.rho, ih2.value() / q);
        r.K = std::max(r.K, 1.0 / (r.mu_min * r.h_min2));
      }
      r.k_provenance = "closed_form";
      break;
    }
    case SystemKind::dirichlet_poly: {
      double mu = kInf;
      for (VertexIndex x : spec.domain->omega()) mu = std::min(mu, g.mu(x));
      r.mu_min = mu;
      r.embedding_u =
          numeric_embedding(prob.graph_ptr(), prob.norm_u(), kInfinity, opts.embedding).value;
      r.K = std::pow(r.embedding_u, p);
      if (!scalar) {
        r.embedding_v =
            numeric_embedding(prob.graph_ptr(), prob.norm_v(), kInfinity, opts.embedding).value;
        r.K = std::max(r.K, std::pow(r.embedding_v, q));
      }
      r.rho = 1.0;
      r.k_provenance = "numeric";
      r.notes.push_back(
          "K is the exact finite-dimensional sup-norm embedding constant raised to the exponent");
      break;
    }
    case SystemKind::pq_wh: {
      const auto x0 = common_mass_minimizer(g, p, q, spec.arity);
      if (!x0) {
        throw HypothesisError("no vertex minimizes both spike masses: " +
                              mass_scan(g, p, q, spec.arity));
      }
      r.x0 = g.id(*x0);
      r.M1_x0 = spike_mass(g, *x0, p, 1);
      r.M2_x0 = scalar ? 0.0 : spike_mass(g, *x0, q, 2);
      r.mu_min = g.mu_min();
      const double h0 = scalar ? r.h_min1 : std::min(r.h_min1, r.h_min2);
      const double hm = h0 * r.mu_min;
      r.rho = r.M1_x0 / p;
      r.K = std::pow(hm, -1.0 / p);
      if (!scalar) {
        r.rho = std::max(r.rho, r.M2_x0 / q);
        r.K = std::max(r.K, std::pow(hm, -1.0 / q));
      }
      r.k_provenance = "closed_form";
      r.notes.push_back(
          "h0, mu0 and x0 are realized on the finite graph; for a truncated infinite graph "
          "the hypotheses are only verified on the truncation");
      break;
    }
  }
  if (g.is_truncation() && spec.system != SystemKind::pq_wh) {
    r.notes.push_back("graph is declared a truncation; constants hold for the truncation only");
  }

  fill_growth(r, prob, opts);

  r.lambda_lo = r.B == kInf ? 0.0 : r.rho / r.B;
  const double factor = scalar ? 1.0 : std::pow(2.0, p - 1.0);
  r.lambda_hi = r.A == 0.0 ? kInf : 1.0 / (p * factor * r.K * r.A);
  r.valid = r.A > 0.0 && r.A < r.B && r.lambda_lo < r.lambda_hi;
  return r;
}

}  // namespace graphvar
