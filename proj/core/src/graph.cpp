// SPDX-License-Identifier: Apache-2.0
#include "graphvar/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <utility>

#include "graphvar/errors.hpp"

namespace graphvar {

WeightedGraph::WeightedGraph(std::vector<VertexRecord> vertices,
                             const std::vector<EdgeRecord>& edges, bool is_truncation)
    : truncation_(is_truncation) {
  if (vertices.empty()) throw ParseError("graph has no vertices");

  const std::size_t n = vertices.size();
  ids_.reserve(n);
  mu_.reserve(n);
  h1_.reserve(n);
  h2_.reserve(n);
  for (auto& v : vertices) {
    if (v.id.empty()) throw ParseError("vertex with empty id");
    if (!(std::isfinite(v.mu) && v.mu > 0.0)) {
      throw ParseError("vertex '" + v.id + "': measure mu must be positive and finite");
    }
    if (!std::isfinite(v.h1) || !std::isfinite(v.h2)) {
      throw ParseError("vertex '" + v.id + "': potentials must be finite");
    }
    if (!lookup_.emplace(v.id, ids_.size()).second) {
      throw ParseError("duplicate vertex id '" + v.id + "'");
    }
    ids_.push_back(std::move(v.id));
    mu_.push_back(v.mu);
    h1_.push_back(v.h1);
    h2_.push_back(v.h2);
  }

  std::vector<std::vector<Neighbor>> lists(n);
  std::set<std::pair<VertexIndex, VertexIndex>> seen;
  for (const auto& e : edges) {
    auto ia = lookup_.find(e.a);
    auto ib = lookup_.find(e.b);
    if (ia == lookup_.end() || ib == lookup_.end()) {
      throw ParseError("edge '" + e.a + "'-'" + e.b + "' references an unknown vertex");
    }
    const VertexIndex a = ia->second;
    const VertexIndex b = ib->second;
    if (a == b) throw ParseError("self-loop at '" + e.a + "'");
    if (!(std::isfinite(e.w) && e.w > 0.0)) {
      throw ParseError("edge '" + e.a + "'-'" + e.b + "': weight must be positive and finite");
    }
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw ParseError("duplicate edge '" + e.a + "'-'" + e.b + "'");
    }
    lists[a].push_back({b, e.w});
    lists[b].push_back({a, e.w});
  }
  edges_ = seen.size();

  offsets_.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) {
    std::sort(lists[x].begin(), lists[x].end(),
              [](const Neighbor& l, const Neighbor& r) { return l.index < r.index; });
    offsets_[x + 1] = offsets_[x] + lists[x].size();
  }
  adjacency_.reserve(offsets_[n]);
  for (auto& l : lists) adjacency_.insert(adjacency_.end(), l.begin(), l.end());
}

const std::string& WeightedGraph::id(VertexIndex x) const {
  if (x >= ids_.size()) throw LookupError("vertex index out of range");
  return ids_[x];
}

VertexIndex WeightedGraph::index(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) throw LookupError("unknown vertex id '" + std::string(id) + "'");
  return it->second;
}

bool WeightedGraph::contains(std::string_view id) const {
  return lookup_.contains(std::string(id));
}

std::span<const Neighbor> WeightedGraph::neighbors(VertexIndex x) const {
  if (x >= ids_.size()) throw LookupError("vertex index out of range");
  return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
}

std::optional<double> WeightedGraph::weight(VertexIndex x, VertexIndex y) const {
  auto nb = neighbors(x);
  auto it = std::lower_bound(nb.begin(), nb.end(), y,
                             [](const Neighbor& n, VertexIndex v) { return n.index < v; });
  if (it == nb.end() || it->index != y) return std::nullopt;
  return it->weight;
}

double WeightedGraph::mu_min() const noexcept {
  return *std::min_element(mu_.begin(), mu_.end());
}

double WeightedGraph::h_min(int channel) const noexcept {
  auto hs = h(channel);
  return *std::min_element(hs.begin(), hs.end());
}

void WeightedGraph::validate_potentials(PotentialMode mode) const {
  for (VertexIndex x = 0; x < size(); ++x) {
    for (int c : {1, 2}) {
      if (!(h(x, c) > 0.0)) {
        throw HypothesisError("potential h" + std::to_string(c) + " at '" + ids_[x] +
                              "' is not positive");
      }
    }
  }
  // On a finite truncation the realized minima serve as h0 and mu0; they are
  // positive exactly when every entry is.
  (void)mode;
}

double degree(const WeightedGraph& g, VertexIndex x) {
  double d = 0.0;
  for (const auto& nb : g.neighbors(x)) d += nb.weight;
  return d;
}

double degree(const WeightedGraph& g, std::string_view x) { return degree(g, g.index(x)); }

std::vector<std::size_t> hop_distances(const WeightedGraph& g,
                                       std::span<const VertexIndex> sources) {
  std::vector<std::size_t> dist(g.size(), kUnreachable);
  std::deque<VertexIndex> queue;
  for (VertexIndex s : sources) {
    if (s >= g.size()) throw LookupError("vertex index out of range");
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const VertexIndex x = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(x)) {
      if (dist[nb.index] == kUnreachable) {
        dist[nb.index] = dist[x] + 1;
        queue.push_back(nb.index);
      }
    }
  }
  return dist;
}

std::size_t graph_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y) {
  if (y >= g.size()) throw LookupError("vertex index out of range");
  const VertexIndex src[] = {x};
  return hop_distances(g, src)[y];
}

std::size_t graph_distance(const WeightedGraph& g, std::string_view x, std::string_view y) {
  return graph_distance(g, g.index(x), g.index(y));
}

DomainPartition::DomainPartition(const WeightedGraph& g, std::vector<VertexIndex> omega)
    : in_omega_(g.size(), false) {
  if (omega.empty()) throw ParameterError("domain omega is empty");
  std::sort(omega.begin(), omega.end());
  omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
  for (VertexIndex x : omega) {
    if (x >= g.size()) throw LookupError("domain vertex index out of range");
    in_omega_[x] = true;
  }
  omega_ = omega;

  std::vector<bool> is_boundary(g.size(), false);
  for (VertexIndex x : omega_) {
    for (const auto& nb : g.neighbors(x)) {
      if (!in_omega_[nb.index]) is_boundary[nb.index] = true;
    }
  }
  for (VertexIndex y = 0; y < g.size(); ++y) {
    if (is_boundary[y]) boundary_.push_back(y);
  }
  // The boundary lies outside omega, so removing it leaves omega unchanged.
  for (VertexIndex x : omega_) {
    if (!is_boundary[x]) interior_.push_back(x);
  }
  stencil_ = omega_;
  stencil_.insert(stencil_.end(), boundary_.begin(), boundary_.end());
  std::sort(stencil_.begin(), stencil_.end());

  distance_ = hop_distances(g, boundary_);
}

std::vector<VertexIndex> DomainPartition::collar(int m) const {
  if (m < 1) throw ParameterError("order m must be >= 1");
  std::vector<VertexIndex> out;
  for (VertexIndex x : interior_) {
    if (distance_[x] != kUnreachable && distance_[x] + 1 <= static_cast<std::size_t>(m)) {
      out.push_back(x);
    }
  }
  return out;
}

std::vector<VertexIndex> DomainPartition::free(int m) const {
  if (m < 1) throw ParameterError("order m must be >= 1");
  std::vector<VertexIndex> out;
  for (VertexIndex x : interior_) {
    if (distance_[x] == kUnreachable || distance_[x] + 1 > static_cast<std::size_t>(m)) {
      out.push_back(x);
    }
  }
  return out;
}

DomainPartition partition_domain(const WeightedGraph& g, std::vector<VertexIndex> omega, int m) {
  if (m < 1) throw ParameterError("order m must be >= 1");
  DomainPartition d(g, std::move(omega));
  if (d.interior().empty()) throw DegenerateDomain("domain interior is empty");
  if (d.free(m).empty()) {
    throw DegenerateDomain("no free vertex remains after removing the order-" +
                           std::to_string(m) + " collar");
  }
  return d;
}

DomainPartition partition_domain(const WeightedGraph& g, std::span<const std::string> omega,
                                 int m) {
  std::vector<VertexIndex> idx;
  idx.reserve(omega.size());
  for (const auto& id : omega) idx.push_back(g.index(id));
  return partition_domain(g, std::move(idx), m);
}

}  // namespace graphvar
