// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphvar/diagnostics.hpp"
#include "graphvar/energy.hpp"
#include "graphvar/graph_io.hpp"
#include "graphvar/solver.hpp"

namespace graphvar {

inline constexpr int kSchemaVersion = 1;

/// A parsed system file:
///   { "system", "p", "q"?, "m1"?, "m2"?, "lambda": number | "midpoint", "arity"?,
///     "model": {"catalog", "params"}, "a_b_source"?: "closed_form" | "estimate",
///     "growth"?: {"A", "B"}, "estimate"?: {"radii": [..] | {"from","to","count"},
///     "grid", "rays"}, "omega"?: [ids], "embedding"?: {"restarts", "seed"} }
/// A "midpoint" lambda is resolved by the caller once the interval is known.
struct SystemConfig {
  SystemSpec spec;
  IntervalOptions interval;
  bool lambda_midpoint = false;
};

/// Throws ParseError on malformed input and DegenerateDomain for unusable
/// Dirichlet domains.
[[nodiscard]] SystemConfig parse_system_config(std::string_view text, const GraphFile& graph);

/// Solver file: any subset of the SolverConfig fields by name.
[[nodiscard]] SolverConfig parse_solver_config(std::string_view text);

/// Provenance block embedded in every report.
struct ReportHeader {
  std::string command;
  std::string graph_hash;
  std::string system_hash;
  std::string solver_hash;
  std::optional<std::uint64_t> seed;
};

/// 16-digit lowercase hex FNV-1a fingerprint.
[[nodiscard]] std::string content_hash(std::string_view bytes);

[[nodiscard]] std::string constants_report_json(const ReportHeader& h, const EnergyProblem& problem,
                                                const IntervalReport& interval);
[[nodiscard]] std::string solve_report_json(const ReportHeader& h, const EnergyProblem& problem,
                                            const SolveReport& report,
                                            const IntervalReport* interval);
[[nodiscard]] std::string probe_report_json(const ReportHeader& h, const EnergyProblem& problem,
                                            const ProbeTrace& trace);
[[nodiscard]] std::string check_report_json(const ReportHeader& h, const WeightedGraph& g,
                                            const IdentityReport& identities,
                                            const EmbeddingReport& embeddings);

struct SweepRow {
  double lambda = 0.0;
  bool inside = false;
  std::vector<double> phis;
};

/// CSV with header lambda,inside,n_points,phi_list; phi values joined by ';'.
[[nodiscard]] std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Parses "a:b:n" into n evenly spaced values from a to b (strictly increasing).
[[nodiscard]] std::vector<double> parse_lambda_grid(std::string_view text);

/// Shortest round-trip decimal text of a double.
[[nodiscard]] std::string format_number(double x);

}  // namespace graphvar
