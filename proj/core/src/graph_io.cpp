// SPDX-License-Identifier: Apache-2.0
#include "graphvar/graph_io.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "graphvar/errors.hpp"
#include "json.hpp"

namespace graphvar {

using nlohmann::json;

namespace {

double number_field(const json& obj, const char* key, std::optional<double> fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ParseError(std::string("missing field '") + key + "'");
  }
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

GraphFile parse_graph_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph document must be an object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw ParseError("graph document needs a 'vertices' array");
  }

  std::vector<VertexRecord> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_object()) throw ParseError("vertex entries must be objects");
    VertexRecord r;
    r.id = string_field(v, "id");
    r.mu = number_field(v, "mu", std::nullopt);
    r.h1 = number_field(v, "h1", 1.0);
    r.h2 = number_field(v, "h2", 1.0);
    vertices.push_back(std::move(r));
  }

  std::vector<EdgeRecord> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError("'edges' must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_object()) throw ParseError("edge entries must be objects");
      edges.push_back({string_field(e, "a"), string_field(e, "b"), number_field(e, "w", 1.0)});
    }
  }

  bool truncation = false;
  if (doc.contains("truncation")) {
    if (!doc["truncation"].is_boolean()) throw ParseError("'truncation' must be a boolean");
    truncation = doc["truncation"].get<bool>();
  }

  GraphFile out;
  out.graph = std::make_shared<const WeightedGraph>(std::move(vertices), edges, truncation);

  if (doc.contains("domain")) {
    const auto& d = doc["domain"];
    if (!d.is_object() || !d.contains("omega") || !d["omega"].is_array()) {
      throw ParseError("'domain' must be an object with an 'omega' array");
    }
    std::vector<std::string> omega;
    for (const auto& id : d["omega"]) {
      if (!id.is_string()) throw ParseError("domain ids must be strings");
      if (!out.graph->contains(id.get<std::string>())) {
        throw ParseError("domain references unknown vertex '" + id.get<std::string>() + "'");
      }
      omega.push_back(id.get<std::string>());
    }
    out.omega = std::move(omega);
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphFile load_graph_file(const std::filesystem::path& path) {
  return parse_graph_json(read_text_file(path));
}

std::string graph_to_json(const WeightedGraph& g,
                          const std::optional<std::vector<std::string>>& omega) {
  json doc;
  doc["vertices"] = json::array();
  for (VertexIndex x = 0; x < g.size(); ++x) {
    doc["vertices"].push_back(
        {{"id", g.id(x)}, {"mu", g.mu(x)}, {"h1", g.h1(x)}, {"h2", g.h2(x)}});
  }
  doc["edges"] = json::array();
  for (VertexIndex x = 0; x < g.size(); ++x) {
    for (const auto& nb : g.neighbors(x)) {
      if (nb.index > x) {
        doc["edges"].push_back({{"a", g.id(x)}, {"b", g.id(nb.index)}, {"w", nb.weight}});
      }
    }
  }
  if (g.is_truncation()) doc["truncation"] = true;
  if (omega) doc["domain"] = {{"omega", *omega}};
  return doc.dump(2);
}

}  // namespace graphvar
