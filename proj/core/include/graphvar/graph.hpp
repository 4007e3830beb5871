// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace graphvar {

using VertexIndex = std::size_t;

/// Hop count returned by graph_distance when no path exists.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Which potential hypothesis a graph is checked against.
enum class PotentialMode {
  finite,  ///< h_i(x) > 0 and mu(x) > 0
  wh,      ///< h_i(x) >= h0 > 0 and mu(x) >= mu0 > 0 on a finite truncation
};

struct Neighbor {
  VertexIndex index;
  double weight;
};

struct VertexRecord {
  std::string id;
  double mu = 1.0;
  double h1 = 1.0;
  double h2 = 1.0;
};

struct EdgeRecord {
  std::string a;
  std::string b;
  double w = 1.0;
};

/// Immutable weighted graph with vertex measure and two potentials.
///
/// Vertex ids are opaque strings. The order in which vertices are supplied
/// fixes the layout of every vector indexed by vertex. Edges are undirected,
/// carry a strictly positive weight and are stored in a CSR adjacency index
/// that lists each edge from both endpoints.
class WeightedGraph {
 public:
  /// Validates and freezes the input. Throws ParseError on an empty vertex
  /// list, duplicate ids, unknown edge endpoints, self-loops, duplicate
  /// edges (in either orientation), or non-positive / non-finite mu or w.
  WeightedGraph(std::vector<VertexRecord> vertices, const std::vector<EdgeRecord>& edges,
                bool is_truncation = false);

  [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_; }

  [[nodiscard]] const std::string& id(VertexIndex x) const;
  [[nodiscard]] VertexIndex index(std::string_view id) const;
  [[nodiscard]] bool contains(std::string_view id) const;
  [[nodiscard]] std::span<const std::string> ids() const noexcept { return ids_; }

  [[nodiscard]] double mu(VertexIndex x) const { return mu_.at(x); }
  [[nodiscard]] double h1(VertexIndex x) const { return h1_.at(x); }
  [[nodiscard]] double h2(VertexIndex x) const { return h2_.at(x); }
  [[nodiscard]] double h(VertexIndex x, int channel) const {
    return channel == 2 ? h2_.at(x) : h1_.at(x);
  }
  [[nodiscard]] std::span<const double> mu() const noexcept { return mu_; }
  [[nodiscard]] std::span<const double> h1() const noexcept { return h1_; }
  [[nodiscard]] std::span<const double> h2() const noexcept { return h2_; }
  [[nodiscard]] std::span<const double> h(int channel) const noexcept {
    return channel == 2 ? std::span<const double>(h2_) : std::span<const double>(h1_);
  }

  [[nodiscard]] std::span<const Neighbor> neighbors(VertexIndex x) const;

  /// Weight of edge xy, or nullopt when x and y are not adjacent.
  [[nodiscard]] std::optional<double> weight(VertexIndex x, VertexIndex y) const;

  /// True when the graph stands in for a finite piece of a locally finite graph.
  [[nodiscard]] bool is_truncation() const noexcept { return truncation_; }

  [[nodiscard]] double mu_min() const noexcept;
  [[nodiscard]] double h_min(int channel) const noexcept;

  /// Checks the potential hypothesis for the given mode; throws
  /// HypothesisError naming the first offending vertex.
  void validate_potentials(PotentialMode mode) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, VertexIndex> lookup_;
  std::vector<double> mu_, h1_, h2_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::size_t edges_ = 0;
  bool truncation_ = false;
};

using GraphPtr = std::shared_ptr<const WeightedGraph>;

/// deg(x) = sum of w_xy over neighbors y.
[[nodiscard]] double degree(const WeightedGraph& g, VertexIndex x);
[[nodiscard]] double degree(const WeightedGraph& g, std::string_view x);

/// Unweighted hop distance, kUnreachable when x and y lie in different components.
[[nodiscard]] std::size_t graph_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y);
[[nodiscard]] std::size_t graph_distance(const WeightedGraph& g, std::string_view x,
                                         std::string_view y);

/// Multi-source BFS hop distances from `sources` to every vertex.
[[nodiscard]] std::vector<std::size_t> hop_distances(const WeightedGraph& g,
                                                     std::span<const VertexIndex> sources);

/// A bounded domain Omega with its exterior boundary and Dirichlet collar.
///
/// The boundary is the set of vertices outside Omega adjacent to Omega, so it
/// is disjoint from Omega and the interior equals Omega. For order m the
/// collar holds the interior vertices within hop distance m-1 of the
/// boundary; functions in the Dirichlet space vanish there, on the boundary,
/// and everywhere outside Omega. The free set is the interior minus the collar.
class DomainPartition {
 public:
  DomainPartition(const WeightedGraph& g, std::vector<VertexIndex> omega);

  [[nodiscard]] std::span<const VertexIndex> omega() const noexcept { return omega_; }
  [[nodiscard]] std::span<const VertexIndex> boundary() const noexcept { return boundary_; }
  [[nodiscard]] std::span<const VertexIndex> interior() const noexcept { return interior_; }

  /// Omega union boundary: the support of Dirichlet energy integrals.
  [[nodiscard]] std::span<const VertexIndex> stencil() const noexcept { return stencil_; }

  [[nodiscard]] std::vector<VertexIndex> collar(int m) const;
  [[nodiscard]] std::vector<VertexIndex> free(int m) const;

  [[nodiscard]] bool in_omega(VertexIndex x) const { return in_omega_.at(x); }

  /// Hop distance from the boundary for every vertex (kUnreachable when the
  /// boundary is empty or unreachable).
  [[nodiscard]] std::span<const std::size_t> boundary_distance() const noexcept {
    return distance_;
  }

 private:
  std::vector<VertexIndex> omega_, boundary_, interior_, stencil_;
  std::vector<bool> in_omega_;
  std::vector<std::size_t> distance_;
};

/// Builds the partition and checks that free(m) is non-empty; throws
/// DegenerateDomain otherwise, ParameterError for m < 1 or an empty omega.
[[nodiscard]] DomainPartition partition_domain(const WeightedGraph& g,
                                               std::span<const std::string> omega, int m);
[[nodiscard]] DomainPartition partition_domain(const WeightedGraph& g,
                                               std::vector<VertexIndex> omega, int m);

}  // namespace graphvar
