// SPDX-License-Identifier: Apache-2.0
#include "graphvar/reports.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "graphvar/errors.hpp"
#include "graphvar/numeric.hpp"
#include "json.hpp"

namespace graphvar {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

json parse_doc(std::string_view text, const char* what) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + what + ": " + e.what());
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return it->get<int>();
}

std::vector<double> get_numbers(const json& obj, const char* key, std::vector<double> fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const char* what) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ParseError(std::string("unknown field '") + it.key() + "' in " + what);
  }
}

// JSON has no infinities; they are written as strings.
ordered num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ordered vec(const Eigen::VectorXd& v) {
  ordered a = ordered::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

ordered header_json(const ReportHeader& h) {
  ordered j;
  j["command"] = h.command;
  j["graph_hash"] = h.graph_hash;
  if (!h.system_hash.empty()) j["system_hash"] = h.system_hash;
  if (!h.solver_hash.empty()) j["solver_hash"] = h.solver_hash;
  if (h.seed) j["seed"] = *h.seed;
  return j;
}

ordered envelope(const ReportHeader& h) {
  ordered j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = header_json(h);
  return j;
}

ordered growth_json(const GrowthEstimate& e) {
  ordered j;
  j["estimate"] = num(e.estimate);
  j["heuristic"] = e.heuristic;
  ordered rows = ordered::array();
  for (const auto& r : e.table) {
    ordered row = ordered::array({num(r.radius), num(r.ratio)});
    if (r.ray >= 0) row.push_back(r.ray);
    rows.push_back(row);
  }
  j["table"] = rows;
  return j;
}

ordered system_json(const SystemSpec& s) {
  ordered j;
  j["system"] = to_string(s.system);
  j["p"] = s.p;
  if (s.arity == 2) j["q"] = s.q;
  j["m1"] = s.m1;
  if (s.arity == 2) j["m2"] = s.m2;
  j["lambda"] = num(s.lambda);
  j["arity"] = s.arity;
  j["model"] = {{"catalog", s.model->name()}, {"params", ordered::parse(s.model->params_json())}};
  return j;
}

ordered interval_json(const IntervalReport& r, const WeightedGraph& g) {
  (void)g;
  ordered j;
  j["system"] = to_string(r.system);
  j["arity"] = r.arity;
  j["rho"] = num(r.rho);
  j["K"] = num(r.K);
  j["K_provenance"] = r.k_provenance;
  j["A"] = num(r.A);
  j["B"] = num(r.B);
  j["A_B_provenance"] = r.ab_provenance;
  j["A_B_heuristic"] = r.ab_heuristic;
  j["lambda_lo"] = num(r.lambda_lo);
  j["lambda_hi"] = num(r.lambda_hi);
  j["valid"] = r.valid;
  j["mu_min"] = num(r.mu_min);
  j["h1_min"] = num(r.h_min1);
  if (r.arity == 2) j["h2_min"] = num(r.h_min2);
  if (r.x0) {
    j["x0"] = *r.x0;
    j["M1_x0"] = num(r.M1_x0);
    if (r.arity == 2) j["M2_x0"] = num(r.M2_x0);
  }
  if (r.system == SystemKind::dirichlet_poly) {
    j["sup_embedding_u"] = num(r.embedding_u);
    if (r.arity == 2) j["sup_embedding_v"] = num(r.embedding_v);
  }
  if (!r.estimate_a.table.empty()) {
    j["estimate_A"] = growth_json(r.estimate_a);
    j["estimate_B"] = growth_json(r.estimate_b);
  }
  j["notes"] = r.notes;
  return j;
}

ordered vertex_ids(const WeightedGraph& g) {
  ordered a = ordered::array();
  for (const auto& id : g.ids()) a.push_back(id);
  return a;
}

std::string finish(const ordered& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string content_hash(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

SystemConfig parse_system_config(std::string_view text, const GraphFile& graph) {
  const json doc = parse_doc(text, "system file");
  reject_unknown(doc,
                 {"system", "p", "q", "m1", "m2", "lambda", "arity", "model", "a_b_source",
                  "growth", "estimate", "omega", "embedding", "description"},
                 "system file");
  SystemConfig cfg;
  auto& s = cfg.spec;
  if (!doc.contains("system") || !doc["system"].is_string()) {
    throw ParseError("system file needs a 'system' name");
  }
  s.system = parse_system_kind(doc["system"].get<std::string>());
  s.arity = get_int(doc, "arity", 2);
  if (s.arity != 1 && s.arity != 2) throw ParseError("arity must be 1 or 2");
  if (!doc.contains("p")) throw ParseError("system file needs the exponent 'p'");
  s.p = get_number(doc, "p", 2.0);
  s.q = get_number(doc, "q", s.p);
  s.m1 = get_int(doc, "m1", 1);
  s.m2 = get_int(doc, "m2", s.m1);

  auto lam = doc.find("lambda");
  if (lam == doc.end()) throw ParseError("system file needs 'lambda'");
  if (lam->is_string() && lam->get<std::string>() == "midpoint") {
    cfg.lambda_midpoint = true;
    s.lambda = 1.0;
  } else if (lam->is_number()) {
    s.lambda = lam->get<double>();
  } else {
    throw ParseError("'lambda' must be a number or \"midpoint\"");
  }

  if (!doc.contains("model")) throw ParseError("system file needs a 'model'");
  s.model = make_model(doc["model"].dump(), *graph.graph, s.arity);

  if (s.system == SystemKind::dirichlet_poly) {
    std::vector<std::string> omega;
    if (doc.contains("omega")) {
      if (!doc["omega"].is_array()) throw ParseError("'omega' must be an array of ids");
      for (const auto& v : doc["omega"]) {
        if (!v.is_string()) throw ParseError("'omega' must be an array of ids");
        omega.push_back(v.get<std::string>());
      }
    } else if (graph.omega) {
      omega = *graph.omega;
    } else {
      throw ParseError("dirichlet_poly needs a domain: 'omega' in the system or graph file");
    }
    for (const auto& id : omega) {
      if (!graph.graph->contains(id)) throw ParseError("omega names unknown vertex '" + id + "'");
    }
    const int m = s.arity == 2 ? std::max(s.m1, s.m2) : s.m1;
    s.domain = std::make_shared<const DomainPartition>(partition_domain(*graph.graph, omega, m));
  }

  auto& iv = cfg.interval;
  if (doc.contains("a_b_source")) {
    const auto src = doc["a_b_source"];
    if (src == "closed_form") {
      iv.source = ABSource::closed_form;
    } else if (src == "estimate") {
      iv.source = ABSource::estimate;
    } else {
      throw ParseError("'a_b_source' must be \"closed_form\" or \"estimate\"");
    }
  }
  if (doc.contains("growth")) {
    const auto& g = doc["growth"];
    if (!g.is_object() || !g.contains("A") || !g.contains("B")) {
      throw ParseError("'growth' must give both A and B");
    }
    iv.A = get_number(g, "A", 0.0);
    iv.B = get_number(g, "B", 0.0);
  }
  if (doc.contains("estimate")) {
    const auto& e = doc["estimate"];
    if (!e.is_object()) throw ParseError("'estimate' must be an object");
    reject_unknown(e, {"radii", "grid", "rays"}, "estimate");
    if (e.contains("radii")) {
      const auto& r = e["radii"];
      if (r.is_array()) {
        iv.radii = get_numbers(e, "radii", {});
      } else if (r.is_object()) {
        iv.radii = geometric_radii(get_number(r, "from", 1.0), get_number(r, "to", 1e6),
                                   get_int(r, "count", 361));
      } else {
        throw ParseError("'radii' must be an array or {from, to, count}");
      }
    }
    iv.grid = get_int(e, "grid", iv.grid);
    iv.rays = get_int(e, "rays", iv.rays);
  }
  if (doc.contains("embedding")) {
    const auto& e = doc["embedding"];
    if (!e.is_object()) throw ParseError("'embedding' must be an object");
    iv.embedding.restarts = get_int(e, "restarts", iv.embedding.restarts);
    iv.embedding.seed = static_cast<std::uint64_t>(get_int(e, "seed", 1));
  }
  return cfg;
}

SolverConfig parse_solver_config(std::string_view text) {
  const json doc = parse_doc(text, "solver file");
  reject_unknown(doc,
                 {"starts", "amplitudes", "probe_amplitudes", "tolerance", "max_iterations",
                  "armijo", "backtrack", "memory", "seed", "distinct_rel", "amplitude_cap",
                  "deflation", "deflation_weight", "deflation_width", "deflation_iterations",
                  "batch_size", "threads", "description"},
                 "solver file");
  SolverConfig c;
  c.starts = get_int(doc, "starts", c.starts);
  c.amplitudes = get_numbers(doc, "amplitudes", c.amplitudes);
  c.probe_amplitudes = get_numbers(doc, "probe_amplitudes", c.probe_amplitudes);
  c.tolerance = get_number(doc, "tolerance", c.tolerance);
  c.max_iterations = get_int(doc, "max_iterations", c.max_iterations);
  c.armijo = get_number(doc, "armijo", c.armijo);
  c.backtrack = get_number(doc, "backtrack", c.backtrack);
  c.memory = get_int(doc, "memory", c.memory);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ParseError("'seed' must be a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  c.distinct_rel = get_number(doc, "distinct_rel", c.distinct_rel);
  c.amplitude_cap = get_number(doc, "amplitude_cap", c.amplitude_cap);
  if (doc.contains("deflation")) {
    if (!doc["deflation"].is_boolean()) throw ParseError("'deflation' must be a boolean");
    c.deflation = doc["deflation"].get<bool>();
  }
  c.deflation_weight = get_number(doc, "deflation_weight", c.deflation_weight);
  c.deflation_width = get_number(doc, "deflation_width", c.deflation_width);
  c.deflation_iterations = get_int(doc, "deflation_iterations", c.deflation_iterations);
  c.batch_size = get_int(doc, "batch_size", c.batch_size);
  c.threads = get_int(doc, "threads", c.threads);
  try {
    validate(c);
  } catch (const ParameterError& e) {
    throw ParseError(std::string("solver file: ") + e.what());
  }
  return c;
}

std::string constants_report_json(const ReportHeader& h, const EnergyProblem& problem,
                                  const IntervalReport& interval) {
  const auto& g = problem.graph();
  const auto& spec = problem.spec();
  ordered j = envelope(h);
  j["system"] = system_json(spec);
  j["interval"] = interval_json(interval, g);

  // Per-vertex spike masses and the embedding constants of the two spaces.
  ordered masses = ordered::array();
  for (VertexIndex x = 0; x < g.size(); ++x) {
    ordered m;
    m["id"] = g.id(x);
    m["degree"] = num(degree(g, x));
    m["M1"] = num(spike_mass(g, x, spec.p, 1));
    if (spec.arity == 2) m["M2"] = num(spike_mass(g, x, spec.q, 2));
    masses.push_back(m);
  }
  j["spike_masses"] = masses;

  ordered emb = ordered::array();
  const auto add = [&](const NormSpec& ns, const char* which) {
    const EmbeddingConstant c = closed_form_embedding(g, ns, kInfinity);
    ordered e;
    e["space"] = which;
    e["norm"] = to_string(ns.kind);
    e["m"] = ns.m;
    e["l"] = ns.l;
    e["target"] = "sup";
    e["value"] = c.provenance == ConstantProvenance::unavailable ? ordered(nullptr) : num(c.value);
    e["provenance"] = to_string(c.provenance);
    e["source"] = c.source;
    emb.push_back(e);
  };
  add(problem.norm_u(), "u");
  if (spec.arity == 2) add(problem.norm_v(), "v");
  j["embedding_constants"] = emb;
  return finish(j);
}

std::string solve_report_json(const ReportHeader& h, const EnergyProblem& problem,
                              const SolveReport& report, const IntervalReport* interval) {
  const auto& g = problem.graph();
  ordered j = envelope(h);
  j["system"] = system_json(problem.spec());
  if (interval) j["interval"] = interval_json(*interval, g);
  j["vertex_ids"] = vertex_ids(g);

  ordered pts = ordered::array();
  for (const auto& p : report.points) {
    ordered e;
    e["phi"] = num(p.phi);
    e["psi"] = num(p.psi);
    e["energy"] = num(p.energy);
    e["residual"] = num(p.residual);
    e["start"] = p.start;
    e["origin"] = p.origin;
    e["iterations"] = p.iterations;
    e["norm"] = num(problem.system_norm(p.coords));
    e["u"] = vec(p.state.u);
    if (p.state.v.size() > 0) e["v"] = vec(p.state.v);
    pts.push_back(e);
  }
  j["critical_points"] = pts;
  j["n_points"] = report.points.size();

  ordered dist = ordered::array();
  double min_dist = std::numeric_limits<double>::infinity();
  // distance / (1 + larger norm), comparable with the solver's distinct_rel
  double min_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> norms;
  for (const auto& p : report.points) norms.push_back(problem.system_norm(p.coords));
  for (std::size_t i = 0; i < report.distances.size(); ++i) {
    ordered row = ordered::array();
    for (std::size_t k = 0; k < report.distances[i].size(); ++k) {
      const double d = report.distances[i][k];
      row.push_back(num(d));
      if (k > i) {
        min_dist = std::min(min_dist, d);
        min_ratio = std::min(min_ratio, d / (1.0 + std::max(norms[i], norms[k])));
      }
    }
    dist.push_back(row);
  }
  j["distinct_pairs"] = {{"min_distance", num(min_dist)},
                         {"min_relative_separation", num(min_ratio)},
                         {"distances", dist}};

  ordered starts = ordered::array();
  for (const auto& s : report.starts) {
    starts.push_back({{"index", s.index},
                      {"origin", s.origin},
                      {"status", s.status},
                      {"outcome", s.outcome},
                      {"iterations", s.iterations},
                      {"residual", num(s.residual)}});
  }
  j["starts_used"] = report.starts_used;
  j["iterations"] = report.iterations;
  j["starts"] = starts;
  j["notes"] = {
      "multi-start coverage of basins is heuristic; the points found are a finite sample"};
  return finish(j);
}

std::string probe_report_json(const ReportHeader& h, const EnergyProblem& problem,
                              const ProbeTrace& t) {
  ordered j = envelope(h);
  j["system"] = system_json(problem.spec());
  j["probe"] = t.kind;
  if (t.x0) {
    j["x0"] = *t.x0;
    j["x0_minimizes_masses"] = t.x0_minimizes;
  }
  if (t.kind == "constant") {
    j["rho"] = num(t.rho);
    j["bound_holds"] = t.bound_holds;
    j["max_higher_gradient"] = num(t.max_higher_gradient);
  } else {
    j["max_gradient_error"] = num(t.max_gradient_error);
  }
  j["max_phi_error"] = num(t.max_phi_error);
  j["floor"] = num(t.floor);
  j["below_floor"] = t.below_floor;
  ordered steps = ordered::array();
  for (const auto& s : t.steps) {
    ordered e;
    e["xi"] = num(s.xi);
    if (problem.spec().arity == 2) e["eta"] = num(s.eta);
    e["phi"] = num(s.phi);
    e["phi_closed"] = num(s.phi_closed);
    e["psi"] = num(s.psi);
    e["energy"] = num(s.energy);
    if (t.kind == "constant") e["bound"] = num(s.bound);
    steps.push_back(e);
  }
  j["trace"] = steps;
  return finish(j);
}

std::string check_report_json(const ReportHeader& h, const WeightedGraph& g,
                              const IdentityReport& identities, const EmbeddingReport& embeddings) {
  ordered j = envelope(h);
  j["vertices"] = g.size();
  j["edges"] = g.edge_count();
  ordered ids = ordered::array();
  for (const auto& c : identities.checks) {
    ids.push_back({{"name", c.name},
                   {"worst_relative_error", num(c.worst)},
                   {"tolerance", num(c.tolerance)},
                   {"samples", c.samples},
                   {"pass", c.pass}});
  }
  j["identities"] = ids;
  ordered emb = ordered::array();
  for (const auto& c : embeddings.checks) {
    ordered e;
    e["target"] = c.label;
    e["closed_form"] = num(c.closed);
    if (c.numeric >= 0.0) e["numeric"] = num(c.numeric);
    e["samples"] = c.samples;
    e["violations"] = c.violations;
    e["sharpest_ratio"] = num(c.sharpest);
    e["numeric_within_closed_form"] = c.numeric_within;
    emb.push_back(e);
  }
  j["embeddings"] = emb;
  j["pass"] = identities.pass() && embeddings.pass();
  return finish(j);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "lambda,inside,n_points,phi_list\n";
  for (const auto& r : rows) {
    out << format_number(r.lambda) << ',' << (r.inside ? 1 : 0) << ',' << r.phis.size() << ',';
    for (std::size_t i = 0; i < r.phis.size(); ++i) {
      if (i) out << ';';
      out << format_number(r.phis[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<double> parse_lambda_grid(std::string_view text) {
  const auto bad = [&] {
    return ParseError("lambda grid must look like a:b:n with 0 <= a < b and n >= 1, got '" +
                      std::string(text) + "'");
  };
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw bad();
  const auto parse = [&](std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw bad();
    return v;
  };
  const double a = parse(text.substr(0, c1));
  const double b = parse(text.substr(c1 + 1, c2 - c1 - 1));
  const double nd = parse(text.substr(c2 + 1));
  if (!(nd >= 1.0) || nd != std::floor(nd) || nd > 1e6) throw bad();
  const auto n = static_cast<int>(nd);
  if (!(a >= 0.0) || !std::isfinite(b) || (n > 1 && !(a < b))) throw bad();
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

}  // namespace graphvar
