// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "graphvar/energy.hpp"
#include "graphvar/errors.hpp"
#include "graphvar/generators.hpp"
#include "helpers.hpp"

using namespace graphvar;
using doctest::Approx;

namespace {

SystemSpec power_system(SystemKind kind, double p, double q, double r, int arity = 2) {
  SystemSpec s;
  s.system = kind;
  s.p = p;
  s.q = q;
  s.arity = arity;
  s.model = make_power_model({1.0, r, 1.0, r}, arity);
  return s;
}

Eigen::VectorXd random_coords(std::size_t n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (auto& c : x) c = d(rng);
  return x;
}

double fd_error(const EnergyProblem& e, const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = e.energy_gradient(x);
  Eigen::VectorXd fd(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    fd(i) = (e.energy(a) - e.energy(b)) / (2 * h);
  }
  return (g - fd).norm() / std::max(1.0, g.norm());
}

}  // namespace

TEST_CASE("potential integral on constants") {
  const auto g = path_graph(5);
  const EnergyProblem e(g, power_system(SystemKind::finite_poly, 2.0, 3.0, 2.0));
  CHECK(e.psi(Eigen::VectorXd::Zero(10)) == 0.0);
  CHECK(e.phi(Eigen::VectorXd::Zero(10)) == 0.0);
  State s{Eigen::VectorXd::Constant(5, 2.0), Eigen::VectorXd::Constant(5, 3.0)};
  CHECK(e.psi(e.restrict(s)) == Approx(5.0 * (4.0 + 9.0)));

  const auto g3 = path_graph(3);
  const EnergyProblem one(g3, power_system(SystemKind::finite_poly, 2.0, 2.0, 2.0, 1));
  CHECK(one.dimension() == 3);
  CHECK(one.psi(Eigen::VectorXd::Constant(3, 2.0)) == Approx(12.0));
}

TEST_CASE("zero lambda leaves only the norm part") {
  std::mt19937_64 rng(4);
  const auto g = random_connected_graph(rng);
  auto spec = power_system(SystemKind::finite_poly, 2.5, 3.0, 3.0);
  spec.lambda = 0.0;
  const EnergyProblem e(g, spec);
  const auto x = random_coords(e.dimension(), rng, 2.0);
  CHECK(e.energy(x) == e.phi(x));
}

TEST_CASE("dirichlet states vanish off the free set") {
  const auto g = path_graph(6);
  auto spec = power_system(SystemKind::dirichlet_poly, 2.0, 2.0, 3.0);
  const std::vector<std::string> omega{"v1", "v2", "v3", "v4"};
  spec.domain = std::make_shared<const DomainPartition>(partition_domain(*g, omega, 2));
  spec.m1 = spec.m2 = 2;
  const EnergyProblem e(g, spec);
  CHECK(e.dimension() == 4);
  State constant{Eigen::VectorXd::Constant(6, 1.0), Eigen::VectorXd::Constant(6, 1.0)};
  CHECK_THROWS_AS((void)e.restrict(constant), ConstraintViolation);
  CHECK(e.energy(Eigen::VectorXd::Zero(4)) == 0.0);
}

TEST_CASE("energy gradient matches central differences") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 4; ++k) {
    RandomGraphOptions o;
    o.max_vertices = 12;
    const auto g = random_connected_graph(rng, o);
    for (double p : {2.0, 2.5, 3.0}) {
      for (double q : {2.0, 3.0}) {
        for (int m : {1, 2}) {
          auto spec = power_system(SystemKind::finite_poly, p, q, 3.0);
          spec.m1 = m;
          spec.m2 = 3 - m;
          spec.lambda = 0.7;
          const EnergyProblem e(g, spec);
          CHECK(fd_error(e, random_coords(e.dimension(), rng, 1.5)) <= 1e-5);
        }
        auto wh = power_system(SystemKind::pq_wh, p, q, 2.5);
        const EnergyProblem e(g, wh);
        CHECK(fd_error(e, random_coords(e.dimension(), rng, 1.5)) <= 1e-5);
      }
    }
  }
}

TEST_CASE("spike masses") {
  CHECK(spike_mass(*gvt::pair_graph(), 0, 2.0, 1) == Approx(2.0));
  const auto iso = gvt::make_graph({{"z", 1, 1, 1}}, {});
  for (double p : {2.0, 3.0, 7.5}) CHECK(spike_mass(*iso, 0, p, 2) == Approx(1.0));
}

TEST_CASE("two-vertex interval constants") {
  const EnergyProblem e(gvt::pair_graph(), power_system(SystemKind::finite_poly, 2.0, 2.0, 2.0));
  const auto r = interval_constants(e);
  CHECK(r.rho == 1.0);
  CHECK(r.K == 1.0);
  CHECK(r.A == Approx(2.0));
  CHECK(r.B == Approx(2.0));
  CHECK_FALSE(r.valid);
}

TEST_CASE("scaling the potentials scales rho and K") {
  std::mt19937_64 rng(8);
  const auto g = random_connected_graph(rng);
  std::vector<VertexRecord> scaled;
  std::vector<EdgeRecord> edges;
  const double c = 3.0;
  for (VertexIndex x = 0; x < g->size(); ++x) {
    scaled.push_back({g->id(x), g->mu(x), c * g->h1(x), c * g->h2(x)});
    for (const auto& n : g->neighbors(x)) {
      if (n.index > x) edges.push_back({g->id(x), g->id(n.index), n.weight});
    }
  }
  const auto g2 = gvt::make_graph(std::move(scaled), edges);
  const auto spec = power_system(SystemKind::finite_poly, 2.0, 3.0, 2.0);
  const auto a = interval_constants(EnergyProblem(g, spec));
  const auto b = interval_constants(EnergyProblem(g2, spec));
  CHECK(b.rho == Approx(c * a.rho));
  CHECK(b.K == Approx(a.K / c));
}

TEST_CASE("single unknown drops the doubling factor") {
  const auto g = path_graph(4);
  const auto two = interval_constants(
      EnergyProblem(g, power_system(SystemKind::finite_poly, 3.0, 3.0, 3.0, 2)));
  const auto one = interval_constants(
      EnergyProblem(g, power_system(SystemKind::finite_poly, 3.0, 3.0, 3.0, 1)));
  CHECK(two.lambda_hi == Approx(1.0 / (3.0 * 4.0 * two.K * two.A)));
  CHECK(one.lambda_hi == Approx(1.0 / (3.0 * one.K * one.A)));
}

TEST_CASE("pq interval needs a common mass minimizer") {
  // a has the smaller M1, b the smaller M2.
  const auto g = gvt::make_graph({{"a", 1, 0.5, 2.0}, {"b", 1, 2.0, 0.5}}, {{"a", "b", 1}});
  const EnergyProblem e(g, power_system(SystemKind::pq_wh, 2.0, 2.0, 3.0));
  CHECK_FALSE(common_mass_minimizer(*g, 2.0, 2.0, 2).has_value());
  CHECK_THROWS_AS((void)interval_constants(e), HypothesisError);
  CHECK(common_mass_minimizer(*g, 2.0, 2.0, 1) == VertexIndex{0});
}

TEST_CASE("norm part is coercive along rays") {
  std::mt19937_64 rng(12);
  const auto g = random_connected_graph(rng);
  const EnergyProblem e(g, power_system(SystemKind::finite_poly, 2.0, 3.0, 2.0));
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd dir = random_coords(e.dimension(), rng, 1.0);
    dir /= e.system_norm(dir);
    for (double t : {10.0, 100.0}) {
      CHECK(e.phi(t * dir) >= 0.5 * std::pow(t / 2.0, 2.0) - 1.0);
    }
  }
}
