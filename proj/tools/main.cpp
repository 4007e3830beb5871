// SPDX-License-Identifier: Apache-2.0
// Command line driver: check, constants, solve, sweep, probe.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "graphvar/diagnostics.hpp"
#include "graphvar/energy.hpp"
#include "graphvar/errors.hpp"
#include "graphvar/graph_io.hpp"
#include "graphvar/reports.hpp"
#include "graphvar/solver.hpp"

namespace gv = graphvar;

namespace {

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kParse = 2,
  kHypothesis = 3,
  kNoSolution = 4,
};

struct Options {
  std::string graph;
  std::string system;
  std::string solver;
  std::string out;
  std::optional<std::uint64_t> seed;
  int trials = 100;
  int samples = 1000;
  std::string lambda_grid;
  std::string probe = "constant";
  std::string x0;
  double amp_max = 1e3;
  int steps = 20;
  double floor = -1e6;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw gv::ParseError("cannot write '" + o.out + "'");
  f << text;
}

struct Loaded {
  gv::GraphFile graph;
  std::string graph_text;
  std::string system_text;
  std::optional<gv::SystemConfig> system;
};

Loaded load(const Options& o, bool need_system) {
  Loaded l;
  l.graph_text = gv::read_text_file(o.graph);
  l.graph = gv::parse_graph_json(l.graph_text);
  if (need_system) {
    l.system_text = gv::read_text_file(o.system);
    l.system = gv::parse_system_config(l.system_text, l.graph);
  }
  return l;
}

gv::ReportHeader header(const char* cmd, const Loaded& l, const std::string& solver_text,
                        std::optional<std::uint64_t> seed) {
  gv::ReportHeader h;
  h.command = cmd;
  h.graph_hash = gv::content_hash(l.graph_text);
  if (!l.system_text.empty()) h.system_hash = gv::content_hash(l.system_text);
  if (!solver_text.empty()) h.solver_hash = gv::content_hash(solver_text);
  h.seed = seed;
  return h;
}

gv::SolverConfig load_solver(const Options& o, std::string& text) {
  gv::SolverConfig cfg;
  if (!o.solver.empty()) {
    text = gv::read_text_file(o.solver);
    cfg = gv::parse_solver_config(text);
  }
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

gv::SystemSpec with_lambda(gv::SystemSpec s, double lambda) {
  s.lambda = lambda;
  return s;
}

double midpoint(const gv::IntervalReport& r) {
  if (!r.valid || !std::isfinite(r.lambda_hi)) {
    throw gv::HypothesisError(
        "lambda \"midpoint\" needs a valid, bounded interval (lambda_lo=" +
        gv::format_number(r.lambda_lo) + ", lambda_hi=" + gv::format_number(r.lambda_hi) + ")");
  }
  return 0.5 * (r.lambda_lo + r.lambda_hi);
}

int cmd_check(const Options& o) {
  const Loaded l = load(o, false);
  const std::uint64_t seed = o.seed.value_or(1);
  const double ls[] = {2.0, 2.5, 3.0, 4.0};
  const int ms[] = {1, 2};
  const auto ids = gv::check_identities(l.graph.graph, o.trials, ls, ms, seed);
  const auto targets = gv::default_embedding_targets(*l.graph.graph);
  const auto emb = gv::check_embeddings(l.graph.graph, targets, o.samples, seed);
  emit(o, gv::check_report_json(header("check", l, "", seed), *l.graph.graph, ids, emb));
  const bool ok = ids.pass() && emb.pass();
  std::cerr << "check: " << (ok ? "pass" : "FAIL") << '\n';
  return ok ? kOk : kCheckFailed;
}

int cmd_constants(const Options& o) {
  const Loaded l = load(o, true);
  const gv::EnergyProblem problem(l.graph.graph, l.system->spec);
  const auto interval = gv::interval_constants(problem, l.system->interval);
  emit(o, gv::constants_report_json(header("constants", l, "", std::nullopt), problem, interval));
  std::cerr << "constants: lambda in (" << gv::format_number(interval.lambda_lo) << ", "
            << gv::format_number(interval.lambda_hi) << "), valid=" << interval.valid << '\n';
  return kOk;
}

int cmd_solve(const Options& o) {
  const Loaded l = load(o, true);
  std::string solver_text;
  const gv::SolverConfig cfg = load_solver(o, solver_text);
  const auto& sc = *l.system;

  std::optional<gv::IntervalReport> interval;
  gv::SystemSpec spec = sc.spec;
  {
    const gv::EnergyProblem probe(l.graph.graph, spec);
    try {
      interval = gv::interval_constants(probe, sc.interval);
    } catch (const gv::HypothesisError&) {
      if (sc.lambda_midpoint) throw;
    }
  }
  if (sc.lambda_midpoint) spec.lambda = midpoint(*interval);

  const gv::EnergyProblem problem(l.graph.graph, spec);
  const gv::SolveReport report = gv::solve(problem, cfg);
  emit(o, gv::solve_report_json(header("solve", l, solver_text, cfg.seed), problem, report,
                                interval ? &*interval : nullptr));
  std::cerr << "solve: " << report.points.size() << " critical point(s) from "
            << report.starts_used << " starts, wall_time=" << report.wall_time << "s\n";
  return report.points.empty() ? kNoSolution : kOk;
}

int cmd_sweep(const Options& o) {
  const Loaded l = load(o, true);
  std::string solver_text;
  const gv::SolverConfig cfg = load_solver(o, solver_text);
  const auto grid = gv::parse_lambda_grid(o.lambda_grid);
  const auto& sc = *l.system;

  const gv::EnergyProblem base(l.graph.graph, sc.spec);
  const auto interval = gv::interval_constants(base, sc.interval);

  std::vector<gv::SweepRow> rows;
  for (double lambda : grid) {
    const gv::EnergyProblem problem(l.graph.graph, with_lambda(sc.spec, lambda));
    const auto report = gv::solve(problem, cfg);
    gv::SweepRow row;
    row.lambda = lambda;
    row.inside = interval.valid && lambda > interval.lambda_lo && lambda < interval.lambda_hi;
    for (const auto& p : report.points) row.phis.push_back(p.phi);
    rows.push_back(std::move(row));
    std::cerr << "sweep: lambda=" << gv::format_number(lambda) << " points="
              << report.points.size() << " wall_time=" << report.wall_time << "s\n";
  }
  emit(o, gv::sweep_csv(rows));
  return kOk;
}

int cmd_probe(const Options& o) {
  const Loaded l = load(o, true);
  const gv::EnergyProblem problem(l.graph.graph, l.system->spec);
  const auto seq = gv::probe_sequence(o.amp_max, o.steps);
  gv::ProbeTrace trace;
  if (o.probe == "constant") {
    trace = gv::probe_unbounded_constant(problem, seq, seq, o.floor);
  } else {
    const auto& g = problem.graph();
    const auto& spec = problem.spec();
    gv::VertexIndex x0 = 0;
    if (o.x0.empty()) {
      const auto m = gv::common_mass_minimizer(g, spec.p, spec.q, spec.arity);
      if (!m) throw gv::HypothesisError("no vertex minimizes both spike masses");
      x0 = *m;
    } else {
      if (!g.contains(o.x0)) throw gv::ParseError("--x0 names unknown vertex '" + o.x0 + "'");
      x0 = g.index(o.x0);
    }
    trace = gv::probe_unbounded_spike(problem, x0, seq, seq, o.floor);
    if (!trace.x0_minimizes) {
      throw gv::HypothesisError("vertex '" + g.id(x0) + "' does not minimize both spike masses");
    }
  }
  emit(o, gv::probe_report_json(header("probe", l, "", std::nullopt), problem, trace));
  std::cerr << "probe: final energy " << gv::format_number(trace.steps.back().energy)
            << (trace.below_floor ? " (below floor)" : "") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational solvers for quasilinear systems on weighted graphs"};
  app.require_subcommand(1);
  Options o;

  const auto add_graph = [&](CLI::App* c) {
    c->add_option("--graph", o.graph, "graph JSON file")->required();
  };
  const auto add_out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "report file (default: stdout)");
  };
  const auto add_system = [&](CLI::App* c) {
    c->add_option("--system", o.system, "system JSON file")->required();
  };
  const auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "random seed");
  };

  auto* check = app.add_subcommand("check", "verify operator identities and embedding bounds");
  add_graph(check);
  add_seed(check);
  add_out(check);
  check->add_option("--trials", o.trials, "random function pairs")->check(CLI::PositiveNumber);
  check->add_option("--samples", o.samples, "random functions per embedding bound")
      ->check(CLI::PositiveNumber);

  auto* constants = app.add_subcommand("constants", "compute the admissible lambda interval");
  add_graph(constants);
  add_system(constants);
  add_out(constants);

  auto* solve = app.add_subcommand("solve", "search for distinct critical points");
  add_graph(solve);
  add_system(solve);
  solve->add_option("--solver", o.solver, "solver JSON file");
  add_seed(solve);
  add_out(solve);

  auto* sweep = app.add_subcommand("sweep", "count critical points over a lambda grid");
  add_graph(sweep);
  add_system(sweep);
  sweep->add_option("--solver", o.solver, "solver JSON file");
  sweep->add_option("--lambda-grid", o.lambda_grid, "grid a:b:n")->required();
  add_seed(sweep);
  add_out(sweep);

  auto* probe = app.add_subcommand("probe", "evaluate the energy along unbounded probe states");
  add_graph(probe);
  add_system(probe);
  probe->add_option("--probe", o.probe, "constant or spike")
      ->check(CLI::IsMember({"constant", "spike"}));
  probe->add_option("--x0", o.x0, "spike vertex (default: common mass minimizer)");
  probe->add_option("--amp-max", o.amp_max, "largest amplitude of the sequence");
  probe->add_option("--steps", o.steps, "sequence length (amplitudes double each step)")
      ->check(CLI::PositiveNumber);
  probe->add_option("--floor", o.floor, "energy level that counts as unbounded below");
  add_out(probe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*check) return cmd_check(o);
    if (*constants) return cmd_constants(o);
    if (*solve) return cmd_solve(o);
    if (*sweep) return cmd_sweep(o);
    if (*probe) return cmd_probe(o);
  } catch (const gv::HypothesisError& e) {
    std::cerr << "hypothesis failure: " << e.what() << '\n';
    return kHypothesis;
  } catch (const gv::Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kParse;
  }
  return kParse;
}
