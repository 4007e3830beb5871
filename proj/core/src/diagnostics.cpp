// SPDX-License-Identifier: Apache-2.0
#include "graphvar/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "graphvar/calculus.hpp"
#include "graphvar/errors.hpp"
#include "graphvar/numeric.hpp"
#include "graphvar/optimize.hpp"

namespace graphvar {

bool IdentityReport::pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

bool EmbeddingReport::pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const EmbeddingCheck& c) {
    return c.violations == 0 && c.numeric_within;
  });
}

int EmbeddingReport::violations() const noexcept {
  int n = 0;
  for (const auto& c : checks) n += c.violations;
  return n;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(rng, -1.0, 1.0);
  return v;
}

std::string fmt(const char* base, double x) {
  std::ostringstream ss;
  ss << base << '(' << x << ')';
  return ss.str();
}

class Tracker {
 public:
  Tracker(std::string name, double tol) { c_.name = std::move(name), c_.tolerance = tol; }
  void add(double a, double b, double scale) {
    c_.worst = std::max(c_.worst, relative_error(a, b, scale));
    ++c_.samples;
  }
  IdentityCheck done() {
    c_.pass = c_.worst <= c_.tolerance;
    return c_;
  }

 private:
  IdentityCheck c_;
};

}  // namespace

IdentityReport check_identities(const GraphPtr& gp, int trials, std::span<const double> l_set,
                                std::span<const int> m_set, std::uint64_t seed,
                                double tolerance) {
  if (trials < 1) throw ParameterError("identity checks need at least one trial");
  for (double l : l_set) {
    if (!(l > 1.0)) throw ParameterError("identity exponents must exceed 1");
  }
  for (int m : m_set) {
    if (m < 1) throw ParameterError("identity orders must be >= 1");
  }
  const auto& g = *gp;
  const std::size_t n = g.size();
  std::mt19937_64 rng(seed);

  Tracker gamma_dir("gamma_directional", tolerance);
  Tracker symmetry("laplacian_symmetry", tolerance);
  std::vector<Tracker> sbp;
  for (double l : l_set) sbp.emplace_back(fmt("summation_by_parts", l), tolerance);
  std::vector<Tracker> variation;
  std::vector<std::pair<int, double>> ml;
  for (int m : m_set) {
    for (double l : l_set) {
      std::ostringstream name;
      name << "poly_first_variation(m=" << m << ",l=" << l << ')';
      variation.emplace_back(name.str(), tolerance);
      ml.emplace_back(m, l);
    }
  }

  for (int t = 0; t < trials; ++t) {
    const GraphFunction u(gp, random_vector(rng, n));
    const GraphFunction v(gp, random_vector(rng, n));

    for (VertexIndex x = 0; x < n; ++x) {
      CompensatedSum s;
      double scale = 0.0;
      for (const auto& nb : g.neighbors(x)) {
        const double term =
            directional_derivative(u, x, nb.index) * directional_derivative(v, x, nb.index);
        s += term;
        scale += std::abs(term);
      }
      gamma_dir.add(gamma(u, v, x), s.value(), scale);
    }

    {
      const GraphFunction lu = laplacian(u);
      const GraphFunction lv = laplacian(v);
      CompensatedSum a, b;
      double scale = 0.0;
      for (VertexIndex x = 0; x < n; ++x) {
        a += g.mu(x) * lu(x) * v(x);
        b += g.mu(x) * u(x) * lv(x);
        scale += g.mu(x) * (std::abs(lu(x) * v(x)) + std::abs(u(x) * lv(x)));
      }
      symmetry.add(a.value(), b.value(), scale);
    }

    for (std::size_t i = 0; i < l_set.size(); ++i) {
      const double l = l_set[i];
      const GraphFunction dl = p_laplacian(u, l);
      CompensatedSum lhs;
      double scale = 0.0;
      for (VertexIndex x = 0; x < n; ++x) {
        lhs += g.mu(x) * dl(x) * v(x);
        scale += g.mu(x) * std::abs(dl(x) * v(x));
      }
      double scale_r = 0.0;
      for (VertexIndex x = 0; x < n; ++x) {
        scale_r += g.mu(x) * safe_pow(grad_length(u, x), l - 2.0) * std::abs(gamma(u, v, x));
      }
      sbp[i].add(lhs.value(), -weak_poly_pairing(u, v, 1, l), std::max(scale, scale_r));
    }

    for (std::size_t i = 0; i < ml.size(); ++i) {
      const auto [m, l] = ml[i];
      NormSpec spec;
      spec.kind = NormKind::finite_full;
      spec.m = m;
      spec.l = l;
      const NormPowerFunctional f(gp, spec, 0.0);
      Eigen::VectorXd grad = f.gradient_full(u.values());
      for (VertexIndex x = 0; x < n; ++x) {
        grad(static_cast<Eigen::Index>(x)) -= g.mu(x) * g.h1(x) * signed_pow(u(x), l - 1.0);
      }
      CompensatedSum dot;
      double scale = 0.0;
      for (VertexIndex x = 0; x < n; ++x) {
        const double term = grad(static_cast<Eigen::Index>(x)) * v(x);
        dot += term;
        scale += std::abs(term);
      }
      variation[i].add(weak_poly_pairing(u, v, m, l), dot.value(), scale);
    }
  }

  // Delta_2 against Delta on every basis vector.
  IdentityCheck l2{"l2_laplacian", 0.0, 1e-14, 0, true};
  for (VertexIndex x = 0; x < n; ++x) {
    const GraphFunction e = GraphFunction::spike(gp, x, 1.0);
    const Eigen::VectorXd a = p_laplacian(e, 2.0).values();
    const Eigen::VectorXd b = laplacian(e).values();
    const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    const double err = scale == 0.0 ? (a - b).cwiseAbs().maxCoeff()
                                    : (a - b).cwiseAbs().maxCoeff() / scale;
    l2.worst = std::max(l2.worst, err);
    ++l2.samples;
  }
  l2.pass = l2.worst <= l2.tolerance;

  IdentityReport out;
  out.checks.push_back(gamma_dir.done());
  for (auto& t : sbp) out.checks.push_back(t.done());
  out.checks.push_back(l2);
  out.checks.push_back(symmetry.done());
  for (auto& t : variation) out.checks.push_back(t.done());
  return out;
}

// Embeddings ----------------------------------------------------------------------

std::vector<EmbeddingTarget> default_embedding_targets(const WeightedGraph& g) {
  std::vector<EmbeddingTarget> out;
  for (int m : {1, 2}) {
    for (double l : {2.0, 3.0}) {
      NormSpec s;
      s.kind = NormKind::finite_full;
      s.m = m;
      s.l = l;
      out.push_back({s, kInfinity});
    }
  }
  if (g.h_min(1) > 0.0 && g.mu_min() > 0.0) {
    for (double l : {2.0, 3.0}) {
      NormSpec s;
      s.kind = NormKind::wh;
      s.l = l;
      out.push_back({s, kInfinity});
      out.push_back({s, l});
      out.push_back({s, 2.0 * l});
    }
  }
  return out;
}

namespace {

std::string target_label(const EmbeddingTarget& t) {
  std::ostringstream ss;
  ss << to_string(t.spec.kind) << "(m=" << t.spec.m << ",l=" << t.spec.l << ",h" << t.spec.channel
     << ")->";
  if (std::isinf(t.r)) {
    ss << "sup";
  } else {
    ss << "L^" << t.r;
  }
  return ss.str();
}

Eigen::VectorXd sample_function(std::mt19937_64& rng, std::size_t n, int kind) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  switch (kind % 4) {
    case 0: v = random_vector(rng, n); break;
    case 1: {
      const auto x = static_cast<Eigen::Index>(rng() % n);
      v(x) = uniform(rng, -10.0, 10.0);
      break;
    }
    case 2: {
      const double c = uniform(rng, -5.0, 5.0);
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = c + 1e-3 * uniform(rng, -1.0, 1.0);
      break;
    }
    default:
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = uniform(rng, -1.0, 1.0) * std::pow(10.0, uniform(rng, -3.0, 3.0));
      }
      break;
  }
  return v;
}

}  // namespace

EmbeddingReport check_embeddings(const GraphPtr& gp, std::span<const EmbeddingTarget> targets,
                                 int samples, std::uint64_t seed, bool numeric) {
  if (samples < 1) throw ParameterError("embedding checks need at least one sample");
  const std::size_t n = gp->size();
  EmbeddingReport out;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& t = targets[k];
    const EmbeddingConstant closed = closed_form_embedding(*gp, t.spec, t.r);
    if (closed.provenance != ConstantProvenance::closed_form) {
      throw ParameterError("no closed-form constant for " + target_label(t));
    }
    EmbeddingCheck c;
    c.label = target_label(t);
    c.target = t;
    c.closed = closed.value;
    std::mt19937_64 rng(seed + 7919 * k);
    for (int s = 0; s < samples; ++s) {
      const GraphFunction u(gp, sample_function(rng, n, s));
      const double base = sobolev_norm(u, t.spec);
      if (base == 0.0) continue;
      ++c.samples;
      const double q = lr_norm(u, t.r) / base / c.closed;
      c.sharpest = std::max(c.sharpest, q);
      if (q > 1.0 + 1e-12) ++c.violations;
    }
    if (numeric) {
      NumericEmbeddingOptions o;
      o.seed = seed + k;
      c.numeric = numeric_embedding(gp, t.spec, t.r, o).value;
      c.numeric_within = c.numeric <= c.closed * (1.0 + 1e-12);
    }
    out.checks.push_back(std::move(c));
  }
  return out;
}

// phi(r) ----------------------------------------------------------------------------

double radial_scale(const EnergyProblem& problem, const Eigen::VectorXd& x, double r) {
  if (problem.phi(x) <= r) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (problem.phi(mid * x) <= r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

namespace {

// A point on {Phi = r} along direction d.
Eigen::VectorXd to_boundary(const EnergyProblem& problem, Eigen::VectorXd d, double r) {
  if (d.norm() == 0.0) return d;
  for (int i = 0; i < 2000 && problem.phi(d) <= r; ++i) d *= 2.0;
  return radial_scale(problem, d, r) * d;
}

struct SupResult {
  double value;
  std::vector<Eigen::VectorXd> maximizers;
};

SupResult sup_psi(const EnergyProblem& problem, double r, const VarphiOptions& opts,
                  std::mt19937_64& rng, int& evals) {
  const std::size_t dim = problem.dimension();
  std::vector<Eigen::VectorXd> dirs;
  dirs.push_back(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim)));
  for (std::size_t i = 0; i < dim && i < 4; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    dirs.push_back(e);
  }
  for (int s = 0; s < opts.starts; ++s) dirs.push_back(random_vector(rng, dim));

  // Psi(s(z) z) with s(z) z on {Phi = r}. Implicit differentiation of
  // Phi(s z) = r gives grad s = -s grad Phi / (grad Phi . z).
  const Objective on_level = [&](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
    ++evals;
    if (z.norm() == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const Eigen::VectorXd x = to_boundary(problem, z, r);
    const double sc = x.norm() / z.norm();
    if (grad) {
      const Eigen::VectorXd gp = problem.psi_gradient(x);
      const Eigen::VectorXd gf = problem.phi_gradient(x);
      const double denom = gf.dot(z);
      if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      *grad = -sc * (gp - (gp.dot(z) / denom) * gf);
    }
    return -problem.psi(x);
  };

  SupResult out{-std::numeric_limits<double>::infinity(), {}};
  for (const auto& d : dirs) {
    DescentOptions o;
    o.max_iterations = opts.iterations;
    o.tolerance = 1e-12 * (1.0 + std::abs(problem.psi(to_boundary(problem, d, r))));
    const auto res = minimize(on_level, d, o);
    Eigen::VectorXd x = to_boundary(problem, res.x, r);
    const double fx = problem.psi(x);
    if (fx > out.value) out.value = fx;
    out.maximizers.push_back(std::move(x));
  }
  return out;
}

}  // namespace

VarphiEstimate estimate_varphi(const EnergyProblem& problem, double r, const VarphiOptions& opts) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("phi(r) needs r > 0");
  const std::size_t dim = problem.dimension();
  std::mt19937_64 rng(opts.seed);
  VarphiEstimate est;
  est.r = r;

  const SupResult sup = sup_psi(problem, r, opts, rng, est.evaluations);
  double S = std::max(sup.value, problem.psi(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))));

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)));
  for (const auto& m : sup.maximizers) starts.push_back(0.5 * m);
  for (int s = 0; s < opts.starts; ++s) {
    starts.push_back(0.5 * to_boundary(problem, random_vector(rng, dim), r));
  }

  // Feasible points visited by the descent; the ratio is re-evaluated with
  // the final S so every entry has a nonnegative numerator.
  std::vector<std::pair<double, double>> visited;  // (Phi, Psi)
  for (int round = 0; round < 3; ++round) {
    double best_psi = S;
    visited.clear();
    const Objective ratio = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      ++est.evaluations;
      const double ph = problem.phi(x);
      if (!(ph < r)) return std::numeric_limits<double>::quiet_NaN();
      const double ps = problem.psi(x);
      visited.emplace_back(ph, ps);
      best_psi = std::max(best_psi, ps);
      const double den = r - ph;
      const double num = S - ps;
      if (grad) {
        *grad = (-problem.psi_gradient(x) * den + num * problem.phi_gradient(x)) / (den * den);
      }
      return num / den;
    };
    DescentOptions d;
    d.max_iterations = opts.iterations;
    d.tolerance = 1e-12;
    for (const auto& x0 : starts) (void)minimize(ratio, x0, d);
    if (best_psi <= S) break;
    S = best_psi;
  }

  for (const auto& v : visited) S = std::max(S, v.second);
  // Near the level set both numerator and denominator are roundoff.
  const double band = 1e-8 * r;
  double best = S / r;
  for (const auto& [ph, ps] : visited) {
    if (r - ph >= band) best = std::min(best, (S - ps) / (r - ph));
  }
  est.sup_psi = S;
  est.ratio_at_zero = S / r;
  est.value = std::max(0.0, best);
  return est;
}

GammaEstimate estimate_gamma(const EnergyProblem& problem, std::span<const double> r_grid,
                             const VarphiOptions& opts) {
  if (r_grid.empty()) throw ParameterError("gamma estimate needs a nonempty r grid");
  std::vector<double> rs(r_grid.begin(), r_grid.end());
  std::sort(rs.begin(), rs.end());
  const std::size_t from = rs.size() > 10 ? rs.size() - 10 : 0;
  GammaEstimate out;
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = from; i < rs.size(); ++i) {
    out.table.push_back(estimate_varphi(problem, rs[i], opts));
    out.value = std::min(out.value, out.table.back().value);
  }
  return out;
}

}  // namespace graphvar
