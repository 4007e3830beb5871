// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "graphvar/errors.hpp"
#include "graphvar/generators.hpp"
#include "graphvar/models.hpp"
#include "helpers.hpp"

using namespace graphvar;
using doctest::Approx;

namespace {

std::vector<VertexIndex> all_of(const WeightedGraph& g) {
  std::vector<VertexIndex> v(g.size());
  std::iota(v.begin(), v.end(), VertexIndex{0});
  return v;
}

PlateauParams oscillator() {
  PlateauParams p;
  p.beta = 1.0;
  p.c = 30.0;
  return p;
}

}  // namespace

TEST_CASE("power model growth estimates") {
  const auto g = path_graph(6);
  const auto active = all_of(*g);
  const auto model = make_power_model({1.0, 2.0, 1.0, 2.0});
  const auto radii = geometric_radii(1.0, 1e4, 41);
  CHECK(estimate_A(*model, *g, active, 2.0, radii).estimate == Approx(6.0).epsilon(1e-9));
  const auto rays = default_rays();
  CHECK(estimate_B(*model, *g, active, 2.0, 2.0, rays, radii).estimate ==
        Approx(6.0).epsilon(1e-9));
  const auto t = model->growth_targets(*g, active, 2.0, 2.0, 2);
  REQUIRE(t.has_value());
  CHECK(t->A == Approx(6.0));
  CHECK(t->B == Approx(6.0));
}

TEST_CASE("vanishing and sublinear models") {
  const auto g = path_graph(4);
  const auto active = all_of(*g);
  const auto zero = make_separable_model({1.0, 2.0, 1.0, 2.0}, std::vector<double>(4, 0.0));
  const auto radii = geometric_radii(1.0, 1e6, 61);
  CHECK(estimate_A(*zero, *g, active, 2.0, radii).estimate == 0.0);
  // growth y^1.5 against y^2: the ratio decays like y^-0.5
  const auto slow = make_power_model({1.0, 1.5, 1.0, 1.5});
  const auto far = geometric_radii(1e10, 1e12, 5);
  CHECK(estimate_B(*slow, *g, active, 2.0, 2.0, default_rays(), far).estimate < 1e-3);
}

TEST_CASE("plateau oscillator estimates match its profile oracle") {
  const auto g = path_graph(10);
  const auto active = all_of(*g);
  const auto model = make_plateau_oscillator(oscillator(), std::vector<double>(10, 1.0));
  const auto t = model->growth_targets(*g, active, 2.0, 2.0, 2);
  REQUIRE(t.has_value());
  CHECK(t->A > 0.0);
  CHECK(t->A < t->B);
  const auto radii = geometric_radii(1.0, 1e6, 361);
  const double a = estimate_A(*model, *g, active, 2.0, radii).estimate;
  const double b = estimate_B(*model, *g, active, 2.0, 2.0, default_rays(), radii).estimate;
  CHECK(std::abs(a - t->A) <= 0.1 * t->A);
  CHECK(std::abs(b - t->B) <= 0.1 * t->B);
}

TEST_CASE("plateau profile is continuously differentiable") {
  const PlateauProfile prof(oscillator());
  CHECK(prof.theta(0.0) == 0.0);
  double prev = -1.0;
  for (double r = 1e-3; r < 1e7; r *= 1.07) {
    const double h = 1e-6 * r;
    const double fd = (prof.theta(r + h) - prof.theta(r - h)) / (2 * h);
    CHECK(fd == Approx(prof.dtheta(r)).epsilon(1e-5).scale(1.0));
    CHECK(prof.theta(r) >= prev);
    prev = prof.theta(r);
  }
  const auto [lo, hi] = prof.asymptotic_ratio_bounds();
  CHECK(lo > 0.0);
  CHECK(lo < hi);
}

TEST_CASE("model partials agree with differences") {
  std::mt19937_64 rng(2);
  const auto g = random_connected_graph(rng);
  const std::vector<double> w(g->size(), 1.5);
  CHECK(partials_mismatch(*make_power_model({2.0, 3.0, 0.5, 2.5}), *g, 200, 3.0, 1) < 1e-6);
  CHECK(partials_mismatch(*make_separable_model({1.0, 2.2, 1.0, 3.0}, w), *g, 200, 3.0, 1) <
        1e-6);
  CHECK(partials_mismatch(*make_plateau_oscillator(oscillator(), w), *g, 200, 40.0, 1) < 1e-5);
}

TEST_CASE("catalog factory") {
  const auto g = gvt::pair_graph();
  const auto m = make_model(R"({"catalog":"power","params":{"r1":3,"r2":3}})", *g, 2);
  CHECK(m->value(0, 2.0, 1.0) == Approx(9.0));
  const auto s = make_model(R"({"catalog":"separable","params":{"b":{"a":2,"b":0}}})", *g, 1);
  CHECK(s->value(0, 2.0, 0.0) == Approx(8.0));
  CHECK(s->value(1, 2.0, 0.0) == 0.0);
  CHECK_THROWS_AS((void)make_model(R"({"catalog":"nope"})", *g, 2), ParseError);
  CHECK_THROWS_AS((void)make_model(R"({"catalog":"power","table":[1,2]})", *g, 2),
                  ParseError);
  CHECK_THROWS_AS((void)make_model(R"({"catalog":"power","params":{"rr":3}})", *g, 2),
                  ParseError);
}

TEST_CASE("geometric radii and rays") {
  const auto r = geometric_radii(1.0, 100.0, 3);
  REQUIRE(r.size() == 3);
  CHECK(r[1] == Approx(10.0));
  const auto rays = default_rays(10);
  CHECK(rays.size() == 16);
  for (const auto& [s, t] : rays) CHECK(std::abs(s) + std::abs(t) == Approx(1.0));
}
