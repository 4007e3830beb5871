// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphvar/graph.hpp"

namespace graphvar {

/// A graph file: the graph itself plus an optional domain.
struct GraphFile {
  GraphPtr graph;
  std::optional<std::vector<std::string>> omega;
};

/// Parses the graph JSON document
///   { "vertices": [{"id", "mu", "h1"?, "h2"?}...],
///     "edges": [{"a", "b", "w"}...],
///     "domain": {"omega": [ids]}?, "truncation": bool? }
/// Missing potentials default to 1. Throws ParseError on malformed input.
[[nodiscard]] GraphFile parse_graph_json(std::string_view text);
[[nodiscard]] GraphFile load_graph_file(const std::filesystem::path& path);

/// Serializes a graph (and optional domain) back to the same schema.
[[nodiscard]] std::string graph_to_json(const WeightedGraph& g,
                                        const std::optional<std::vector<std::string>>& omega = {});

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace graphvar
