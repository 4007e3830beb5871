// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "graphvar/graph.hpp"

namespace gvt {

using graphvar::EdgeRecord;
using graphvar::GraphPtr;
using graphvar::VertexRecord;
using graphvar::WeightedGraph;

inline GraphPtr make_graph(std::vector<VertexRecord> vs, const std::vector<EdgeRecord>& es) {
  return std::make_shared<const WeightedGraph>(std::move(vs), es);
}

/// a - b with the given weight and measures, potentials 1.
inline GraphPtr pair_graph(double w = 1.0, double mu_a = 1.0, double mu_b = 1.0) {
  return make_graph({{"a", mu_a, 1.0, 1.0}, {"b", mu_b, 1.0, 1.0}}, {{"a", "b", w}});
}

/// Path over the given ids with unit data.
inline GraphPtr path_of(const std::vector<std::string>& ids) {
  std::vector<VertexRecord> vs;
  std::vector<EdgeRecord> es;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    vs.push_back({ids[i], 1.0, 1.0, 1.0});
    if (i > 0) es.push_back({ids[i - 1], ids[i], 1.0});
  }
  return make_graph(std::move(vs), es);
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace gvt
