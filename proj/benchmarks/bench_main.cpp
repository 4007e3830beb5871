// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "graphvar/calculus.hpp"
#include "graphvar/energy.hpp"
#include "graphvar/generators.hpp"
#include "graphvar/solver.hpp"

using namespace graphvar;

namespace {

GraphPtr bench_graph(std::size_t n) {
  std::mt19937_64 rng(n);
  RandomGraphOptions o;
  o.min_vertices = o.max_vertices = n;
  return random_connected_graph(rng, o);
}

Eigen::VectorXd bench_vector(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (auto& c : x) c = d(rng);
  return x;
}

void BM_Laplacian(benchmark::State& state) {
  const auto g = bench_graph(static_cast<std::size_t>(state.range(0)));
  const Eigen::VectorXd x = bench_vector(g->size());
  for (auto _ : state) benchmark::DoNotOptimize(apply_laplacian(*g, x));
}
BENCHMARK(BM_Laplacian)->Arg(30)->Arg(300)->Arg(3000);

void BM_EnergyGradient(benchmark::State& state) {
  const auto g = bench_graph(static_cast<std::size_t>(state.range(0)));
  SystemSpec s;
  s.p = 2.5;
  s.q = 3.0;
  s.m1 = 2;
  s.model = make_power_model({1.0, 3.0, 1.0, 3.0});
  const EnergyProblem e(g, s);
  const Eigen::VectorXd x = bench_vector(e.dimension());
  for (auto _ : state) benchmark::DoNotOptimize(e.energy_gradient(x));
}
BENCHMARK(BM_EnergyGradient)->Arg(30)->Arg(300)->Arg(3000);

void BM_SolvePlateau(benchmark::State& state) {
  const auto g = bench_graph(10);
  SystemSpec s;
  s.lambda = 0.6;
  PlateauParams pp;
  s.model = make_plateau_oscillator(pp, std::vector<double>(g->size(), 1.0));
  const EnergyProblem e(g, s);
  SolverConfig cfg;
  cfg.starts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(solve(e, cfg));
}
BENCHMARK(BM_SolvePlateau)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
