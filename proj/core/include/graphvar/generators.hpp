// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "graphvar/graph.hpp"

namespace graphvar {

struct Range {
  double lo = 1.0;
  double hi = 1.0;
};

/// Sampling ranges for random_connected_graph. Weights are drawn from
/// (weight.lo, weight.hi]; measures and potentials from closed ranges.
struct RandomGraphOptions {
  std::size_t min_vertices = 3;
  std::size_t max_vertices = 30;
  Range weight{0.0, 2.0};
  Range mu{0.5, 2.0};
  Range h{0.5, 2.0};
  double extra_edge_probability = 0.15;
};

/// Connected graph: a random spanning tree plus independent extra edges.
/// Vertex ids are "v0", "v1", ...
[[nodiscard]] GraphPtr random_connected_graph(std::mt19937_64& rng,
                                              const RandomGraphOptions& opts = {});

/// Path v0 - v1 - ... - v{n-1} with uniform weight, measure and potentials.
[[nodiscard]] GraphPtr path_graph(std::size_t n, double w = 1.0, double mu = 1.0, double h = 1.0);

/// Star with center "c" and leaves "l0".."l{k-1}".
[[nodiscard]] GraphPtr star_graph(std::size_t leaves, double w = 1.0, double mu = 1.0,
                                  double h = 1.0);

}  // namespace graphvar
