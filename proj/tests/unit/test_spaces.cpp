// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "graphvar/energy.hpp"
#include "graphvar/errors.hpp"
#include "graphvar/generators.hpp"
#include "graphvar/spaces.hpp"
#include "helpers.hpp"

using namespace graphvar;
using doctest::Approx;
using gvt::vec;

TEST_CASE("first order norm on two vertices") {
  const auto g = gvt::pair_graph();
  NormSpec spec;
  CHECK(sobolev_norm(GraphFunction(g, vec({0, 1})), spec) == Approx(std::sqrt(2.0)));
  for (auto kind : {NormKind::finite_full, NormKind::wh}) {
    spec.kind = kind;
    CHECK(sobolev_norm(GraphFunction::zeros(g), spec) == 0.0);
  }
}

TEST_CASE("spike norm power equals spike mass") {
  std::mt19937_64 rng(17);
  const auto g = random_connected_graph(rng);
  for (double l : {2.0, 2.5, 3.0}) {
    NormSpec spec{NormKind::wh, 1, l, 1, nullptr};
    for (VertexIndex x = 0; x < g->size(); ++x) {
      const double xi = 1.7;
      const double n = sobolev_norm(GraphFunction::spike(g, x, xi), spec);
      CHECK(std::pow(n, l) == Approx(std::pow(xi, l) * spike_mass(*g, x, l, 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form sup constant") {
  const auto g = gvt::pair_graph();
  for (double l : {2.0, 3.0, 4.5}) {
    NormSpec spec{NormKind::finite_full, 1, l, 1, nullptr};
    const auto k = closed_form_embedding(*g, spec, kInfinity);
    CHECK(k.provenance == ConstantProvenance::closed_form);
    CHECK(k.value == 1.0);
  }
}

TEST_CASE("numeric constant never exceeds the closed form") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 5; ++k) {
    RandomGraphOptions o;
    o.max_vertices = 10;
    const auto g = random_connected_graph(rng, o);
    for (int m : {1, 2}) {
      NormSpec spec{NormKind::finite_full, m, 2.5, 1, nullptr};
      const auto closed = closed_form_embedding(*g, spec, kInfinity);
      const auto num = numeric_embedding(g, spec, kInfinity);
      CHECK(num.provenance == ConstantProvenance::numeric);
      CHECK(num.value <= closed.value * (1.0 + 1e-9));
    }
    NormSpec wh{NormKind::wh, 1, 2.0, 2, nullptr};
    CHECK(numeric_embedding(g, wh, 4.0).value <=
          closed_form_embedding(*g, wh, 4.0).value * (1.0 + 1e-9));
  }
}

TEST_CASE("single free vertex domain") {
  const auto g = gvt::path_of({"a", "b", "c"});
  const std::vector<std::string> omega{"b"};
  auto d = std::make_shared<const DomainPartition>(partition_domain(*g, omega, 1));
  NormSpec spec{NormKind::dirichlet, 1, 2.0, 1, d};
  const auto free = free_vertices(spec, *g);
  REQUIRE(free.size() == 1);
  const double ratio = 1.0 / sobolev_norm(GraphFunction::spike(g, free[0], 1.0), spec);
  CHECK(numeric_embedding(g, spec, kInfinity).value == Approx(ratio).epsilon(1e-9));
  CHECK(closed_form_embedding(*g, spec, kInfinity).provenance == ConstantProvenance::unavailable);
  CHECK_THROWS_AS((void)sobolev_norm(GraphFunction::spike(g, 0, 1.0), spec), ConstraintViolation);
}

TEST_CASE("norm power gradient matches finite differences") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const auto g = random_connected_graph(rng);
  for (int m : {1, 2, 3}) {
    for (double l : {2.0, 2.5, 3.0}) {
      const NormPowerFunctional f(g, NormSpec{NormKind::finite_full, m, l, 1, nullptr});
      Eigen::VectorXd x(static_cast<Eigen::Index>(g->size()));
      for (auto& c : x) c = d(rng);
      const Eigen::VectorXd grad = f.gradient_full(x);
      Eigen::VectorXd fd(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-6;
        Eigen::VectorXd a = x, b = x;
        a(i) += h;
        b(i) -= h;
        fd(i) = (f.value(a) - f.value(b)) / (2 * h);
      }
      CHECK((grad - fd).norm() <= 1e-6 * std::max(1.0, grad.norm()));
    }
  }
}

TEST_CASE("norm spec validation") {
  const auto g = gvt::pair_graph();
  CHECK_THROWS_AS(validate(NormSpec{NormKind::finite_full, 1, 1.0, 1, nullptr}, *g),
                  ParameterError);
  CHECK_THROWS_AS(validate(NormSpec{NormKind::wh, 2, 2.0, 1, nullptr}, *g), ParameterError);
  CHECK_THROWS(validate(NormSpec{NormKind::dirichlet, 1, 2.0, 1, nullptr}, *g));
}
