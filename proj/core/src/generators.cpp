// SPDX-License-Identifier: Apache-2.0
#include "graphvar/generators.hpp"

#include <memory>
#include <string>
#include <vector>

namespace graphvar {

GraphPtr random_connected_graph(std::mt19937_64& rng, const RandomGraphOptions& opts) {
  std::uniform_int_distribution<std::size_t> size_dist(opts.min_vertices, opts.max_vertices);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](const Range& r) { return r.lo + (r.hi - r.lo) * unit(rng); };
  // Half-open on the left so a zero lower bound never yields a zero weight.
  auto draw_weight = [&] { return opts.weight.hi - (opts.weight.hi - opts.weight.lo) * unit(rng); };

  const std::size_t n = size_dist(rng);
  std::vector<VertexRecord> vertices;
  vertices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    vertices.push_back({"v" + std::to_string(i), draw(opts.mu), draw(opts.h), draw(opts.h)});
  }

  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    const std::size_t j = parent(rng);
    used[i][j] = used[j][i] = true;
    edges.push_back({vertices[j].id, vertices[i].id, draw_weight()});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!used[i][j] && unit(rng) < opts.extra_edge_probability) {
        used[i][j] = used[j][i] = true;
        edges.push_back({vertices[i].id, vertices[j].id, draw_weight()});
      }
    }
  }
  return std::make_shared<const WeightedGraph>(std::move(vertices), edges);
}

GraphPtr path_graph(std::size_t n, double w, double mu, double h) {
  std::vector<VertexRecord> vertices;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i) {
    vertices.push_back({"v" + std::to_string(i), mu, h, h});
    if (i > 0) edges.push_back({"v" + std::to_string(i - 1), "v" + std::to_string(i), w});
  }
  return std::make_shared<const WeightedGraph>(std::move(vertices), edges);
}

GraphPtr star_graph(std::size_t leaves, double w, double mu, double h) {
  std::vector<VertexRecord> vertices{{"c", mu, h, h}};
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < leaves; ++i) {
    vertices.push_back({"l" + std::to_string(i), mu, h, h});
    edges.push_back({"c", "l" + std::to_string(i), w});
  }
  return std::make_shared<const WeightedGraph>(std::move(vertices), edges);
}

}  // namespace graphvar
