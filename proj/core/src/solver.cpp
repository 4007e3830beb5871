// SPDX-License-Identifier: Apache-2.0
#include "graphvar/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "graphvar/calculus.hpp"
#include "graphvar/errors.hpp"
#include "graphvar/numeric.hpp"

namespace graphvar {

void validate(const SolverConfig& cfg) {
  if (cfg.starts < 0) throw ParameterError("starts must be >= 0");
  if (!(cfg.tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (cfg.max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
  if (!(cfg.armijo > 0.0 && cfg.armijo < 1.0)) throw ParameterError("armijo must lie in (0, 1)");
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0)) {
    throw ParameterError("backtrack must lie in (0, 1)");
  }
  if (cfg.memory < 0) throw ParameterError("memory must be >= 0");
  if (!(cfg.distinct_rel > 0.0)) throw ParameterError("distinct_rel must be positive");
  if (!(cfg.amplitude_cap > 0.0)) throw ParameterError("amplitude_cap must be positive");
  if (cfg.batch_size < 1) throw ParameterError("batch_size must be >= 1");
  if (cfg.threads < 1) throw ParameterError("threads must be >= 1");
  if (cfg.deflation_iterations < 0) throw ParameterError("deflation_iterations must be >= 0");
  if (!(cfg.deflation_width > 0.0) || !(cfg.deflation_weight >= 0.0)) {
    throw ParameterError("deflation width must be positive and weight nonnegative");
  }
  for (double a : cfg.amplitudes) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("amplitudes must be positive");
  }
  for (double a : cfg.probe_amplitudes) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("probe amplitudes must be positive");
  }
}

namespace {

std::string amp_label(const char* kind, double a) {
  std::ostringstream ss;
  ss << kind << ':' << a;
  return ss.str();
}

// Uniform double in [0, 1) from the top 53 bits, independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<Start> make_starts(const EnergyProblem& problem, const SolverConfig& cfg) {
  const auto dim = static_cast<Eigen::Index>(problem.dimension());
  std::vector<Start> out;
  out.push_back({Eigen::VectorXd::Zero(dim), "zero"});

  const auto& spec = problem.spec();
  std::optional<VertexIndex> x0;
  if (spec.system == SystemKind::pq_wh) {
    x0 = common_mass_minimizer(problem.graph(), spec.p, spec.q, spec.arity);
  }
  for (double a : cfg.probe_amplitudes) {
    switch (spec.system) {
      case SystemKind::finite_poly:
        out.push_back({Eigen::VectorXd::Constant(dim, a), amp_label("constant", a)});
        break;
      case SystemKind::dirichlet_poly:
        out.push_back({Eigen::VectorXd::Constant(dim, a), amp_label("free_constant", a)});
        break;
      case SystemKind::pq_wh: {
        if (!x0) break;
        Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
        c(static_cast<Eigen::Index>(*x0)) = a;
        if (spec.arity == 2) c(static_cast<Eigen::Index>(problem.dimension_u() + *x0)) = a;
        out.push_back({std::move(c), amp_label("spike", a)});
        break;
      }
    }
  }

  std::mt19937_64 rng(cfg.seed);
  for (double a : cfg.amplitudes) {
    for (int i = 0; i < cfg.starts; ++i) {
      Eigen::VectorXd c(dim);
      for (Eigen::Index k = 0; k < dim; ++k) c(k) = a * (2.0 * unit_uniform(rng) - 1.0);
      out.push_back({std::move(c), amp_label("random", a)});
    }
  }
  return out;
}

namespace {

struct Anchor {
  Eigen::VectorXd x;
  double height;
  double inv_two_sigma2;
};

struct StartResult {
  Eigen::VectorXd x;
  DescentStatus status = DescentStatus::max_iterations;
  int iterations = 0;
  double residual = 0.0;
  bool finite = true;
};

StartResult run_start(const EnergyProblem& problem, const Eigen::VectorXd& x0,
                      const std::vector<Anchor>& anchors, const SolverConfig& cfg,
                      const DescentOptions& opts) {
  StartResult out;
  const Objective energy = problem.objective();
  Eigen::VectorXd g;
  const double e0 = energy(x0, &g);
  if (!std::isfinite(e0) || !g.allFinite()) {
    out.x = x0;
    out.finite = false;
    out.status = DescentStatus::non_finite;
    return out;
  }
  if (g.norm() <= cfg.tolerance) {
    out.x = x0;
    out.status = DescentStatus::converged;
    out.residual = g.norm();
    return out;
  }

  Eigen::VectorXd x = x0;
  if (cfg.deflation && !anchors.empty() && cfg.deflation_iterations > 0) {
    const Objective repelled = [&](const Eigen::VectorXd& y, Eigen::VectorXd* grad) {
      double val = energy(y, grad);
      for (const auto& a : anchors) {
        const Eigen::VectorXd d = y - a.x;
        const double b = a.height * std::exp(-d.squaredNorm() * a.inv_two_sigma2);
        val += b;
        if (grad) *grad -= (2.0 * a.inv_two_sigma2 * b) * d;
      }
      return val;
    };
    DescentOptions first = opts;
    first.max_iterations = cfg.deflation_iterations;
    const DescentResult r = minimize(repelled, x, first);
    out.iterations += r.iterations;
    if (r.x.allFinite() && r.status != DescentStatus::diverged) x = r.x;
  }

  const DescentResult r = minimize(energy, x, opts);
  out.iterations += r.iterations;
  out.x = r.x;
  out.status = r.status;
  out.residual = r.grad_norm;
  out.finite = r.status != DescentStatus::non_finite;
  return out;
}

}  // namespace

SolveReport solve(const EnergyProblem& problem, const SolverConfig& cfg,
                  std::span<const Eigen::VectorXd> extra_starts) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<Start> starts;
  for (const auto& x : extra_starts) {
    if (static_cast<std::size_t>(x.size()) != problem.dimension()) {
      throw ParameterError("extra start has the wrong dimension");
    }
    starts.push_back({x, "given"});
  }
  for (auto& s : make_starts(problem, cfg)) starts.push_back(std::move(s));

  DescentOptions opts;
  opts.tolerance = cfg.tolerance;
  opts.max_iterations = cfg.max_iterations;
  opts.armijo = cfg.armijo;
  opts.backtrack = cfg.backtrack;
  opts.memory = cfg.memory;
  opts.max_abs_coordinate = cfg.amplitude_cap;

  SolveReport report;
  std::vector<CriticalPoint> accepted;
  std::vector<double> norms;
  std::vector<Anchor> anchors;

  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  for (std::size_t begin = 0; begin < starts.size(); begin += batch) {
    const std::size_t end = std::min(starts.size(), begin + batch);
    std::vector<StartResult> results(end - begin);
    const auto work = [&](std::size_t i) {
      results[i - begin] = run_start(problem, starts[i].coords, anchors, cfg, opts);
    };
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads),
                                                       end - begin);
    if (nthreads <= 1) {
      for (std::size_t i = begin; i < end; ++i) work(i);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
          for (std::size_t i = begin + t; i < end; i += nthreads) work(i);
        });
      }
      for (auto& th : pool) th.join();
    }

    // Merge in start order so the outcome does not depend on thread timing.
    for (std::size_t i = begin; i < end; ++i) {
      const StartResult& r = results[i - begin];
      StartRecord rec;
      rec.index = static_cast<int>(i);
      rec.origin = starts[i].origin;
      rec.status = to_string(r.status);
      rec.iterations = r.iterations;
      rec.residual = r.residual;
      report.iterations += r.iterations;

      if (!r.finite) {
        rec.outcome = "non_finite";
      } else if (r.status == DescentStatus::diverged) {
        rec.outcome = "diverged";
      } else if (!(r.residual <= cfg.tolerance)) {
        rec.outcome = "not_converged";
      } else {
        const double nx = problem.system_norm(r.x);
        bool duplicate = false;
        for (std::size_t k = 0; k < accepted.size() && !duplicate; ++k) {
          const double radius = cfg.distinct_rel * (1.0 + std::max(nx, norms[k]));
          duplicate = problem.distance(r.x, accepted[k].coords) <= radius;
        }
        if (duplicate) {
          rec.outcome = "duplicate";
        } else {
          rec.outcome = "accepted";
          CriticalPoint cp;
          cp.coords = r.x;
          cp.state = problem.expand(r.x);
          cp.phi = problem.phi(r.x);
          cp.psi = problem.psi(r.x);
          cp.energy = cp.phi - problem.spec().lambda * cp.psi;
          cp.residual = problem.energy_gradient(r.x).norm();
          cp.start = static_cast<int>(i);
          cp.origin = starts[i].origin;
          cp.iterations = r.iterations;
          accepted.push_back(std::move(cp));
          norms.push_back(nx);
        }
      }
      report.starts.push_back(std::move(rec));
    }
    report.starts_used = static_cast<int>(end);

    anchors.clear();
    for (std::size_t k = 0; k < accepted.size(); ++k) {
      const double sigma = cfg.deflation_width * (1.0 + accepted[k].coords.norm());
      anchors.push_back({accepted[k].coords,
                         cfg.deflation_weight * (1.0 + std::abs(accepted[k].energy)),
                         1.0 / (2.0 * sigma * sigma)});
    }
  }

  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const CriticalPoint& a, const CriticalPoint& b) { return a.phi < b.phi; });
  report.points = std::move(accepted);
  const std::size_t n = report.points.size();
  report.distances.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = problem.distance(report.points[i].coords, report.points[j].coords);
      report.distances[i][j] = report.distances[j][i] = d;
    }
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// Probes --------------------------------------------------------------------------

std::vector<double> probe_sequence(double amplitude, int steps) {
  if (steps < 1) throw ParameterError("probe sequences need at least one step");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ParameterError("probe amplitude must be finite and >= 0");
  }
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 1; k <= steps; ++k) out[static_cast<std::size_t>(k - 1)] = amplitude * std::ldexp(1.0, k - steps);
  return out;
}

namespace {

void check_sequences(std::span<const double> xi, std::span<const double> eta, int arity) {
  if (xi.empty()) throw ParameterError("probe sequence is empty");
  if (arity == 2 && eta.size() != xi.size()) {
    throw ParameterError("xi and eta sequences must have equal length");
  }
}

void finish(ProbeTrace& t) {
  for (const auto& s : t.steps) {
    if (s.energy < t.floor) t.below_floor = true;
  }
}

}  // namespace

ProbeTrace probe_unbounded_constant(const EnergyProblem& problem, std::span<const double> xi,
                                   std::span<const double> eta, double floor) {
  const auto& spec = problem.spec();
  if (spec.system != SystemKind::finite_poly) {
    throw ParameterError("the constant probe applies to finite_poly systems");
  }
  check_sequences(xi, eta, spec.arity);
  const auto& g = problem.graph();
  const GraphPtr& gp = problem.graph_ptr();

  CompensatedSum ih1, ih2;
  for (VertexIndex x = 0; x < g.size(); ++x) {
    ih1 += g.mu(x) * g.h1(x);
    ih2 += g.mu(x) * g.h2(x);
  }
  ProbeTrace t;
  t.kind = "constant";
  t.floor = floor;
  t.rho = ih1.value() / spec.p;
  if (spec.arity == 2) t.rho = std::max(t.rho, ih2.value() / spec.q);

  for (std::size_t k = 0; k < xi.size(); ++k) {
    ProbeStep s;
    s.xi = xi[k];
    s.eta = spec.arity == 2 ? eta[k] : 0.0;
    State st;
    st.u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()), s.xi);
    if (spec.arity == 2) st.v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()), s.eta);
    const Eigen::VectorXd c = problem.restrict(st);
    s.phi = problem.phi(c);
    s.psi = problem.psi(c);
    s.energy = s.phi - spec.lambda * s.psi;

    double xp = std::pow(std::abs(s.xi), spec.p);
    s.phi_closed = xp / spec.p * ih1.value();
    double yq = 0.0;
    if (spec.arity == 2) {
      yq = std::pow(std::abs(s.eta), spec.q);
      s.phi_closed += yq / spec.q * ih2.value();
    }
    s.bound = t.rho * (xp + yq) - spec.lambda * s.psi;
    if (s.energy > s.bound + 1e-12 * std::max({1.0, std::abs(s.bound), std::abs(s.energy)})) {
      t.bound_holds = false;
    }
    t.max_phi_error = std::max(t.max_phi_error, relative_error(s.phi, s.phi_closed));

    const Eigen::VectorXd gu = higher_grad_length_field(GraphFunction(gp, st.u), spec.m1);
    t.max_higher_gradient = std::max(t.max_higher_gradient, gu.cwiseAbs().maxCoeff());
    if (spec.arity == 2) {
      const Eigen::VectorXd gv = higher_grad_length_field(GraphFunction(gp, st.v), spec.m2);
      t.max_higher_gradient = std::max(t.max_higher_gradient, gv.cwiseAbs().maxCoeff());
    }
    t.steps.push_back(s);
  }
  finish(t);
  return t;
}

ProbeTrace probe_unbounded_spike(const EnergyProblem& problem, VertexIndex x0,
                                std::span<const double> xi, std::span<const double> eta,
                                double floor) {
  const auto& spec = problem.spec();
  if (spec.system != SystemKind::pq_wh) {
    throw ParameterError("the spike probe applies to pq_wh systems");
  }
  check_sequences(xi, eta, spec.arity);
  const auto& g = problem.graph();
  if (x0 >= g.size()) throw LookupError("spike vertex out of range");
  const GraphPtr& gp = problem.graph_ptr();

  ProbeTrace t;
  t.kind = "spike";
  t.floor = floor;
  t.x0 = g.id(x0);
  t.x0_minimizes = common_mass_minimizer(g, spec.p, spec.q, spec.arity) == x0;
  if (!t.x0_minimizes) {
    // Another vertex may tie with the reported minimizer.
    const auto m1 = spike_mass(g, x0, spec.p, 1);
    const auto m2 = spec.arity == 2 ? spike_mass(g, x0, spec.q, 2) : 0.0;
    bool ok = true;
    for (VertexIndex y = 0; y < g.size() && ok; ++y) {
      ok = m1 <= spike_mass(g, y, spec.p, 1) * (1.0 + 1e-12) &&
           (spec.arity == 1 || m2 <= spike_mass(g, y, spec.q, 2) * (1.0 + 1e-12));
    }
    t.x0_minimizes = ok;
  }
  const double M1 = spike_mass(g, x0, spec.p, 1);
  const double M2 = spec.arity == 2 ? spike_mass(g, x0, spec.q, 2) : 0.0;

  const auto check_gradients = [&](double amp) {
    const GraphFunction u = GraphFunction::spike(gp, x0, amp);
    const double at_x0 = std::sqrt(degree(g, x0) / (2.0 * g.mu(x0))) * std::abs(amp);
    t.max_gradient_error = std::max(t.max_gradient_error, relative_error(grad_length(u, x0), at_x0));
    for (const auto& nb : g.neighbors(x0)) {
      const double closed = std::sqrt(nb.weight / (2.0 * g.mu(nb.index))) * std::abs(amp);
      t.max_gradient_error =
          std::max(t.max_gradient_error, relative_error(grad_length(u, nb.index), closed));
    }
  };

  for (std::size_t k = 0; k < xi.size(); ++k) {
    ProbeStep s;
    s.xi = xi[k];
    s.eta = spec.arity == 2 ? eta[k] : 0.0;
    State st;
    st.u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
    st.u(static_cast<Eigen::Index>(x0)) = s.xi;
    if (spec.arity == 2) {
      st.v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
      st.v(static_cast<Eigen::Index>(x0)) = s.eta;
    }
    const Eigen::VectorXd c = problem.restrict(st);
    s.phi = problem.phi(c);
    s.psi = problem.psi(c);
    s.energy = s.phi - spec.lambda * s.psi;
    s.phi_closed = std::pow(std::abs(s.xi), spec.p) * M1 / spec.p;
    if (spec.arity == 2) s.phi_closed += std::pow(std::abs(s.eta), spec.q) * M2 / spec.q;
    t.max_phi_error = std::max(t.max_phi_error, relative_error(s.phi, s.phi_closed));
    check_gradients(s.xi);
    if (spec.arity == 2) check_gradients(s.eta);
    t.steps.push_back(s);
  }
  finish(t);
  return t;
}

}  // namespace graphvar
