// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

#include "graphvar/errors.hpp"
#include "graphvar/generators.hpp"
#include "graphvar/graph.hpp"
#include "graphvar/graph_io.hpp"
#include "helpers.hpp"

using namespace graphvar;
using gvt::make_graph;

namespace {

std::vector<std::string> ids_of(const WeightedGraph& g, std::span<const VertexIndex> xs) {
  std::vector<std::string> out;
  for (auto x : xs) out.push_back(g.id(x));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("degree sums incident weights") {
  CHECK(degree(*gvt::pair_graph(), "a") == 1.0);
  const auto iso = make_graph({{"z", 1, 1, 1}}, {});
  CHECK(degree(*iso, "z") == 0.0);
  const auto star = star_graph(3, 2.0);
  CHECK(degree(*star, "c") == 6.0);
}

TEST_CASE("hop distance") {
  const auto g = gvt::path_of({"a", "b", "c"});
  CHECK(graph_distance(*g, "a", "a") == 0);
  CHECK(graph_distance(*g, "a", "c") == 2);
  const auto split = make_graph({{"a", 1, 1, 1}, {"b", 1, 1, 1}, {"c", 1, 1, 1}}, {{"a", "b", 1}});
  CHECK(graph_distance(*split, "a", "c") == kUnreachable);
}

TEST_CASE("construction rejects malformed graphs") {
  using V = std::vector<VertexRecord>;
  CHECK_THROWS_AS(WeightedGraph(V{}, {}), ParseError);
  CHECK_THROWS_AS(WeightedGraph(V{{"a", 1, 1, 1}, {"a", 1, 1, 1}}, {}), ParseError);
  CHECK_THROWS_AS(WeightedGraph(V{{"a", 1, 1, 1}}, {{"a", "a", 1}}), ParseError);
  CHECK_THROWS_AS(WeightedGraph(V{{"a", 1, 1, 1}, {"b", 1, 1, 1}}, {{"a", "b", -1}}),
                  ParseError);
  CHECK_THROWS_AS(WeightedGraph(V{{"a", 1, 1, 1}, {"b", 1, 1, 1}}, {{"a", "b", 1}, {"b", "a", 1}}),
                  ParseError);
  CHECK_THROWS_AS(WeightedGraph(V{{"a", 0, 1, 1}}, {}), ParseError);
  CHECK_THROWS_AS(WeightedGraph(V{{"a", 1, 1, 1}}, {{"a", "q", 1}}), ParseError);
}

TEST_CASE("adjacency is symmetric") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const auto g = random_connected_graph(rng);
    for (VertexIndex x = 0; x < g->size(); ++x) {
      for (const auto& n : g->neighbors(x)) {
        const auto back = g->weight(n.index, x);
        REQUIRE(back.has_value());
        CHECK(*back == n.weight);
      }
    }
  }
}

TEST_CASE("domain partition") {
  SUBCASE("single interior vertex") {
    const auto g = gvt::path_of({"a", "b", "c"});
    const std::vector<std::string> omega{"b"};
    const auto d = partition_domain(*g, omega, 1);
    CHECK(ids_of(*g, d.boundary()) == std::vector<std::string>{"a", "c"});
    CHECK(ids_of(*g, d.interior()) == std::vector<std::string>{"b"});
  }
  SUBCASE("whole graph has empty boundary") {
    const auto g = gvt::path_of({"a", "b", "c"});
    const std::vector<std::string> omega{"a", "b", "c"};
    const auto d = partition_domain(*g, omega, 1);
    CHECK(d.boundary().empty());
    CHECK(d.interior().size() == 3);
  }
  SUBCASE("second order collar") {
    const auto g = gvt::path_of({"a", "b", "c", "d", "e"});
    const std::vector<std::string> omega{"b", "c", "d"};
    const auto d = partition_domain(*g, omega, 2);
    CHECK(ids_of(*g, d.boundary()) == std::vector<std::string>{"a", "e"});
    const auto collar = d.collar(2);
    const auto free = d.free(2);
    CHECK(ids_of(*g, collar) == std::vector<std::string>{"b", "d"});
    CHECK(ids_of(*g, free) == std::vector<std::string>{"c"});
    CHECK_THROWS_AS((void)partition_domain(*g, omega, 3), DegenerateDomain);
  }
}

TEST_CASE("graph json round trip") {
  std::mt19937_64 rng(11);
  const auto g = random_connected_graph(rng);
  const auto text = graph_to_json(*g, std::vector<std::string>{"v0", "v1"});
  const auto back = parse_graph_json(text);
  REQUIRE(back.graph->size() == g->size());
  CHECK(back.graph->edge_count() == g->edge_count());
  for (VertexIndex x = 0; x < g->size(); ++x) {
    CHECK(back.graph->id(x) == g->id(x));
    CHECK(back.graph->mu(x) == g->mu(x));
    CHECK(back.graph->h2(x) == g->h2(x));
  }
  REQUIRE(back.omega.has_value());
  CHECK(back.omega->size() == 2);
  CHECK(graph_to_json(*back.graph, back.omega) == text);
}

TEST_CASE("graph json rejects bad input") {
  CHECK_THROWS_AS((void)parse_graph_json("{"), ParseError);
  CHECK_THROWS_AS((void)parse_graph_json(R"({"vertices": [], "edges": []})"), ParseError);
  CHECK_THROWS_AS((void)parse_graph_json(
                      R"({"vertices": [{"id":"a","mu":1},{"id":"b","mu":1}],
                          "edges": [{"a":"a","b":"b","w":-2}]})"),
                  ParseError);
}

TEST_CASE("potential hypotheses") {
  const auto g = make_graph({{"a", 1, 0.0, 1}, {"b", 1, 1, 1}}, {{"a", "b", 1}});
  CHECK_THROWS_AS(g->validate_potentials(PotentialMode::finite), HypothesisError);
  CHECK_NOTHROW(gvt::pair_graph()->validate_potentials(PotentialMode::wh));
}
