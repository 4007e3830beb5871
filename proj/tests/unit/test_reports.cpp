// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <limits>

#include "graphvar/errors.hpp"
#include "graphvar/graph_io.hpp"
#include "graphvar/reports.hpp"

using namespace graphvar;

namespace {

GraphFile two_vertex() {
  return parse_graph_json(R"({"vertices":[{"id":"a","mu":1},{"id":"b","mu":1}],
                             "edges":[{"a":"a","b":"b","w":1}]})");
}

}  // namespace

TEST_CASE("system config parsing") {
  const auto g = two_vertex();
  const auto c = parse_system_config(
      R"({"system":"finite_poly","p":2,"q":3,"lambda":"midpoint",
          "model":{"catalog":"power","params":{"r1":3,"r2":3}},
          "estimate":{"radii":{"from":1,"to":100,"count":5}}})",
      g);
  CHECK(c.lambda_midpoint);
  CHECK(c.spec.q == 3.0);
  CHECK(c.interval.radii.size() == 5);
  CHECK_THROWS_AS((void)parse_system_config(
                      R"({"system":"finite_poly","p":2,"lambda":1,"bogus":1,
                          "model":{"catalog":"power"}})",
                      g),
                  ParseError);
  CHECK_THROWS_AS((void)parse_system_config(R"({"system":"weird","p":2,"lambda":1,
                                              "model":{"catalog":"power"}})",
                                            g),
                  ParseError);
}

TEST_CASE("solver config parsing") {
  const auto s = parse_solver_config(R"({"starts":3,"amplitudes":[1,2],"seed":9})");
  CHECK(s.starts == 3);
  CHECK(s.amplitudes.size() == 2);
  CHECK(s.seed == 9);
  CHECK_THROWS_AS((void)parse_solver_config(R"({"tolerance":-1})"), ParseError);
  CHECK_THROWS_AS((void)parse_solver_config(R"({"unknown":1})"), ParseError);
}

TEST_CASE("lambda grids") {
  const auto g = parse_lambda_grid("0:1:5");
  REQUIRE(g.size() == 5);
  CHECK(g[2] == 0.5);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(parse_lambda_grid("0.3:0.3:1").size() == 1);
  CHECK_THROWS_AS((void)parse_lambda_grid("1:0:3"), ParseError);
  CHECK_THROWS_AS((void)parse_lambda_grid("-1:1:3"), ParseError);
  CHECK_THROWS_AS((void)parse_lambda_grid("abc"), ParseError);
}

TEST_CASE("sweep table") {
  std::vector<SweepRow> rows{{0.5, true, {0.0, 1.5}}, {1.0, false, {}}};
  CHECK(sweep_csv(rows) == "lambda,inside,n_points,phi_list\n0.5,1,2,0;1.5\n1,0,0,\n");
}

TEST_CASE("number formatting and hashing") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02e23}) {
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(content_hash("abc") == content_hash("abc"));
  CHECK(content_hash("abc") != content_hash("abd"));
  CHECK(content_hash("").size() == 16);
}

TEST_CASE("constants report carries hand-checkable values") {
  const auto gf = two_vertex();
  const auto sc = parse_system_config(
      R"({"system":"finite_poly","p":2,"q":2,"lambda":1,"model":{"catalog":"power"}})", gf);
  const EnergyProblem e(gf.graph, sc.spec);
  const auto iv = interval_constants(e, sc.interval);
  ReportHeader h{"constants", "g", "s", "", std::nullopt};
  const auto j = nlohmann::json::parse(constants_report_json(h, e, iv));
  CHECK(j["schema_version"] == 1);
  CHECK(j["interval"]["rho"] == 1.0);
  CHECK(j["interval"]["K"] == 1.0);
  CHECK(j["spike_masses"][0]["M1"] == 2.0);
  CHECK(j["embedding_constants"][0]["value"] == 1.0);
}
