// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "graphvar/diagnostics.hpp"
#include "graphvar/energy.hpp"
#include "graphvar/errors.hpp"
#include "graphvar/generators.hpp"
#include "graphvar/graph_io.hpp"
#include "graphvar/reports.hpp"
#include "graphvar/solver.hpp"

namespace fs = std::filesystem;
using namespace graphvar;
using nlohmann::json;

namespace {

const fs::path kData = GRAPHVAR_DATA_DIR;
const fs::path kCli = GRAPHVAR_CLI_PATH;
const fs::path kWork = GRAPHVAR_WORK_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

/// Runs the CLI with stderr discarded; returns its exit status.
int run_cli(const std::string& args) {
  const std::string cmd = quote(kCli.string()) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string data(const std::string& rel) { return quote((kData / rel).string()); }
std::string work(const std::string& name) { return (kWork / name).string(); }

Eigen::VectorXd uniform(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (auto& c : x) c = d(rng);
  return x;
}

// 1 -------------------------------------------------------------------------
Outcome identity_suite() {
  Timer t;
  std::mt19937_64 rng(1001);
  const double ls[] = {2.0, 2.5, 3.0, 4.0};
  const int ms[] = {1, 2};
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < 100; ++k) {
    const auto g = random_connected_graph(rng);
    const auto r = check_identities(g, 10, ls, ms, static_cast<std::uint64_t>(k), 1e-10);
    for (const auto& c : r.checks) {
      worst = std::max(worst, c.worst);
      ok = ok && c.pass && c.worst <= 1e-10;
    }
  }
  const double secs = t.seconds();
  return {ok && secs <= 10.0, "max rel err " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// 2 -------------------------------------------------------------------------
Outcome embedding_suite() {
  Timer t;
  std::mt19937_64 rng(2002);
  int violations = 0;
  bool numeric_ok = true;
  double sharpest = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto g = random_connected_graph(rng);
    const auto targets = default_embedding_targets(*g);
    const auto r = check_embeddings(g, targets, 10000, static_cast<std::uint64_t>(k), true);
    violations += r.violations();
    for (const auto& c : r.checks) {
      numeric_ok = numeric_ok && c.numeric_within;
      sharpest = std::max(sharpest, c.sharpest);
    }
  }
  const double secs = t.seconds();
  return {violations == 0 && numeric_ok && secs <= 30.0,
          std::to_string(violations) + " violations, sharpest ratio " + fmt(sharpest) +
              ", numeric within closed form: " + (numeric_ok ? "yes" : "no") + ", " + fmt(secs) +
              " s"};
}

// 3 -------------------------------------------------------------------------
double gradient_error(const EnergyProblem& e, const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = e.energy_gradient(x);
  Eigen::VectorXd fd(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(x(i)));
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    fd(i) = (e.energy(a) - e.energy(b)) / (2.0 * h);
  }
  return (g - fd).norm() / std::max(g.norm(), 1e-12);
}

std::shared_ptr<const DomainPartition> random_domain(const WeightedGraph& g, int m,
                                                     std::mt19937_64& rng) {
  std::uniform_int_distribution<VertexIndex> pick(0, g.size() - 1);
  for (int attempt = 0; attempt < 50; ++attempt) {
    const VertexIndex c = pick(rng);
    const std::vector<VertexIndex> src{c};
    const auto d = hop_distances(g, src);
    std::vector<VertexIndex> omega;
    for (VertexIndex x = 0; x < g.size(); ++x) {
      if (d[x] <= 2) omega.push_back(x);
    }
    try {
      return std::make_shared<const DomainPartition>(partition_domain(g, omega, m));
    } catch (const DegenerateDomain&) {
    }
  }
  return nullptr;
}

Outcome gradient_correctness() {
  Timer t;
  std::mt19937_64 rng(3003);
  const double exps[] = {2.0, 2.5, 3.0};
  const SystemKind kinds[] = {SystemKind::finite_poly, SystemKind::dirichlet_poly,
                              SystemKind::pq_wh};
  double worst = 0.0;
  int states = 0;
  for (auto kind : kinds) {
    int done = 0;
    while (done < 100) {
      RandomGraphOptions o;
      o.min_vertices = 6;
      o.max_vertices = 20;
      const auto g = random_connected_graph(rng, o);
      for (int j = 0; j < 10 && done < 100; ++j, ++done) {
        SystemSpec s;
        s.system = kind;
        s.p = exps[done % 3];
        s.q = exps[(done / 3) % 3];
        if (kind != SystemKind::pq_wh) {
          s.m1 = 1 + done % 2;
          s.m2 = 1 + (done / 2) % 2;
        }
        s.lambda = 0.8;
        s.model = make_power_model({1.0, 3.0, 0.5, 2.5});
        if (kind == SystemKind::dirichlet_poly) {
          s.domain = random_domain(*g, std::max(s.m1, s.m2), rng);
          if (!s.domain) {
            --done;
            break;
          }
        }
        const EnergyProblem e(g, s);
        const auto x = uniform(e.dimension(), rng, -1.5, 1.5);
        worst = std::max(worst, gradient_error(e, x));
        ++states;
      }
    }
  }
  const double secs = t.seconds();
  return {worst <= 1e-5 && secs <= 60.0,
          std::to_string(states) + " states, max rel err " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// 4 -------------------------------------------------------------------------
Outcome closed_form_probes() {
  Timer t;
  std::mt19937_64 rng(4004);
  const double exps[] = {2.0, 2.5, 3.0};
  double spike_err = 0.0, const_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto g = random_connected_graph(rng);
    SystemSpec s;
    s.p = exps[k % 3];
    s.q = exps[(k / 3) % 3];
    s.model = make_power_model({1.0, 3.0, 1.0, 3.0});
    const auto seq = uniform(6, rng, 0.1, 5.0);
    const std::vector<double> xi(seq.begin(), seq.end());
    const std::vector<double> eta(xi.rbegin(), xi.rend());
    s.system = SystemKind::finite_poly;
    const auto c = probe_unbounded_constant(EnergyProblem(g, s), xi, eta);
    const_err = std::max(const_err, c.max_phi_error);
    s.system = SystemKind::pq_wh;
    const EnergyProblem wh(g, s);
    for (VertexIndex x0 = 0; x0 < g->size(); ++x0) {
      const auto sp = probe_unbounded_spike(wh, x0, xi, eta);
      spike_err = std::max({spike_err, sp.max_phi_error, sp.max_gradient_error});
    }
  }

  const auto gf = load_graph_file(kData / "ten_vertex.json");
  SystemSpec sup;
  sup.model = make_power_model({1.0, 3.0, 1.0, 3.0});
  const auto big = probe_sequence(1e3, 20);
  const auto c = probe_unbounded_constant(EnergyProblem(gf.graph, sup), big, big);
  sup.system = SystemKind::pq_wh;
  const EnergyProblem wh(gf.graph, sup);
  const auto x0 = common_mass_minimizer(*gf.graph, sup.p, sup.q, sup.arity);
  const bool spike_div =
      x0 && probe_unbounded_spike(wh, *x0, big, big).steps.back().energy < -1e6;
  const bool const_div = c.steps.back().energy < -1e6;

  const double secs = t.seconds();
  return {spike_err <= 1e-10 && const_err <= 1e-12 && spike_div && const_div && secs <= 10.0,
          "spike rel err " + fmt(spike_err) + ", constant rel err " + fmt(const_err) +
              ", diverge constant/spike " + (const_div ? "yes" : "no") + "/" +
              (spike_div ? "yes" : "no") + ", " + fmt(secs) + " s"};
}

// 5 -------------------------------------------------------------------------
Outcome hand_constants() {
  const std::string out = work("constants_two_vertex.json");
  const int rc = run_cli("constants --graph " + data("two_vertex.json") + " --system " +
                         data("systems/two_vertex_finite.json") + " --out " + quote(out));
  if (rc != 0) return {false, "cli exit " + std::to_string(rc)};
  const auto j = json::parse(slurp(out));
  const auto& iv = j["interval"];
  bool ok = iv["rho"].get<double>() == 1.0 && iv["K"].get<double>() == 1.0;
  double m1 = -1, m2 = -1;
  for (const auto& v : j["spike_masses"]) {
    if (v["id"] == "a") {
      m1 = v["M1"].get<double>();
      m2 = v["M2"].get<double>();
    }
  }
  ok = ok && m1 == 2.0 && m2 == 2.0;
  bool kl = !j["embedding_constants"].empty();
  for (const auto& e : j["embedding_constants"]) {
    kl = kl && e["value"].get<double>() == 1.0 && e["provenance"] == "closed_form";
  }
  return {ok && kl, "rho " + fmt(iv["rho"].get<double>()) + ", K " + fmt(iv["K"].get<double>()) +
                        ", M1(a) " + fmt(m1) + ", M2(a) " + fmt(m2) +
                        ", K_l = 1: " + (kl ? "yes" : "no")};
}

// 6 -------------------------------------------------------------------------
struct SweepRowIn {
  double lambda;
  int n;
};

std::vector<SweepRowIn> read_sweep(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<SweepRowIn> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string lam, inside, n;
    std::getline(ls, lam, ',');
    std::getline(ls, inside, ',');
    std::getline(ls, n, ',');
    rows.push_back({std::stod(lam), std::stoi(n)});
  }
  return rows;
}

Outcome multiplicity() {
  const std::string graph = data("ten_vertex.json");
  const std::string system = data("systems/oscillator_midpoint.json");
  const std::string solver = data("solver/default.json");
  const std::string out = work("solve_oscillator.json");

  Timer t;
  const int rc = run_cli("solve --graph " + graph + " --system " + system + " --solver " + solver +
                         " --out " + quote(out));
  const double secs = t.seconds();
  if (rc != 0) return {false, "solve exit " + std::to_string(rc)};
  const auto j = json::parse(slurp(out));
  const auto& iv = j["interval"];
  const bool interval_ok = iv["valid"].get<bool>() && iv["A"].get<double>() > 0.0 &&
                           iv["A"].get<double>() < iv["B"].get<double>();
  const double lo = iv["lambda_lo"].get<double>();
  const double hi = iv["lambda_hi"].get<double>();

  const auto solver_cfg = parse_solver_config(read_text_file(kData / "solver/default.json"));
  const auto& pts = j["critical_points"];
  const int n = static_cast<int>(pts.size());
  double worst_res = 0.0;
  std::vector<double> phis;
  for (const auto& p : pts) {
    worst_res = std::max(worst_res, p["residual"].get<double>());
    phis.push_back(p["phi"].get<double>());
  }
  const double sep = n > 1 ? j["distinct_pairs"]["min_relative_separation"].get<double>() : 0.0;
  // distinct energy levels, in increasing order
  int levels = phis.empty() ? 0 : 1;
  for (std::size_t i = 1; i < phis.size(); ++i) {
    if (phis[i] < phis[i - 1]) levels = -1000;
    if (phis[i] > phis[i - 1] * (1.0 + 1e-6) + 1e-9) ++levels;
  }
  const bool solve_ok = interval_ok && n >= 3 && worst_res <= 1e-8 &&
                        sep > solver_cfg.distinct_rel && levels >= 3 && secs <= 60.0;

  const std::string inner = work("sweep_interior.csv");
  const std::string outer = work("sweep_outer.csv");
  const double a = lo + 0.05 * (hi - lo);
  const double b = hi - 0.05 * (hi - lo);
  const int rc1 = run_cli("sweep --graph " + graph + " --system " + system + " --solver " +
                          solver + " --lambda-grid " + format_number(a) + ":" + format_number(b) +
                          ":5 --out " + quote(inner));
  const double small = 1e-3 * lo;
  const double large = 10.0 * hi;
  const int rc2 = run_cli("sweep --graph " + graph + " --system " + system + " --solver " +
                          solver + " --lambda-grid " + format_number(small) + ":" +
                          format_number(large) + ":2 --out " + quote(outer));
  if (rc1 != 0 || rc2 != 0) return {false, "sweep failed"};
  const auto in_rows = read_sweep(inner);
  const auto out_rows = read_sweep(outer);
  int interior = n;
  for (const auto& r : in_rows) interior = std::max(interior, r.n);
  bool trend = out_rows.size() == 2;
  for (const auto& r : out_rows) trend = trend && r.n <= interior;

  std::string detail = std::to_string(n) + " points on " + std::to_string(levels) +
                       " energy levels, max residual " + fmt(worst_res) + ", min separation " +
                       fmt(sep) + ", " + fmt(secs) + " s; counts at lambda " + fmt(small) +
                       " / " + fmt(large) + ": ";
  for (const auto& r : out_rows) detail += std::to_string(r.n) + " ";
  detail += "vs interior max " + std::to_string(interior);
  return {solve_ok && trend, detail};
}

// 7 -------------------------------------------------------------------------
Outcome varphi_chain() {
  Timer t;
  std::mt19937_64 rng(7007);
  double worst = 0.0;  // max of varphi / bound
  int evaluated = 0;
  const double exps[][2] = {{2.0, 2.0}, {2.0, 3.0}, {2.5, 2.5}, {3.0, 2.5}, {2.0, 2.5}};
  for (int k = 0; k < 5; ++k) {
    RandomGraphOptions o;
    o.max_vertices = 12;
    const auto g = random_connected_graph(rng, o);
    SystemSpec s;
    s.p = exps[k][0];
    s.q = exps[k][1];
    const double delta = std::min(s.p, s.q);
    s.model = make_power_model({1.0, delta, 1.0, delta});
    const EnergyProblem e(g, s);
    const auto iv = interval_constants(e);
    std::vector<VertexIndex> all(g->size());
    std::iota(all.begin(), all.end(), VertexIndex{0});
    for (double c : geometric_radii(0.5, 50.0, 5)) {
      // max of |s|^d + |t|^d over the l1 ball of radius c is c^d, at an axis point
      double ball = 0.0;
      for (auto x : all) ball += g->mu(x) * s.model->weight(x) * std::pow(c, delta);
      const double bound =
          s.p * iv.K * std::pow(2.0, s.p - 1.0) * ball / std::pow(c, delta);
      const double r_n = std::pow(2.0, 1.0 - s.p) * std::pow(c, delta) / (s.p * iv.K);
      VarphiOptions vo;
      vo.seed = static_cast<std::uint64_t>(k + 1);
      const auto v = estimate_varphi(e, r_n, vo);
      worst = std::max(worst, v.value / bound);
      ++evaluated;
    }
  }
  const double secs = t.seconds();
  return {worst <= 1.05, std::to_string(evaluated) + " radii, max varphi/bound " + fmt(worst) +
                             ", " + fmt(secs) + " s"};
}

// 8 -------------------------------------------------------------------------
Outcome determinism() {
  const std::string graph = data("ten_vertex.json");
  const std::string osc = data("systems/oscillator_midpoint.json");
  const std::string solver = data("solver/default.json");
  const std::vector<std::pair<std::string, std::string>> runs{
      {"check", "check --graph " + graph + " --seed 5 --trials 20 --samples 300"},
      {"constants", "constants --graph " + graph + " --system " + osc},
      {"solve", "solve --graph " + graph + " --system " + osc + " --solver " + solver +
                    " --seed 11"},
      {"sweep", "sweep --graph " + graph + " --system " + osc + " --solver " + solver +
                    " --seed 11 --lambda-grid 0.55:0.7:3"},
      {"probe_constant", "probe --graph " + graph + " --system " +
                             data("systems/superlinear_constant.json") + " --probe constant"},
      {"probe_spike", "probe --graph " + graph + " --system " +
                          data("systems/superlinear_spike.json") + " --probe spike"},
  };
  std::string differing;
  for (const auto& [name, args] : runs) {
    const std::string a = work("det_" + name + "_1.out");
    const std::string b = work("det_" + name + "_2.out");
    const int r1 = run_cli(args + " --out " + quote(a));
    const int r2 = run_cli(args + " --out " + quote(b));
    const std::string ta = slurp(a);
    if (r1 != 0 || r2 != 0 || ta.empty() || ta != slurp(b)) differing += name + " ";
  }
  return {differing.empty(), differing.empty()
                                 ? std::to_string(runs.size()) + " commands byte-identical"
                                 : "differs: " + differing};
}

}  // namespace

int main() {
  fs::create_directories(kWork);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 identity suite", identity_suite},
      {"2 embedding suite", embedding_suite},
      {"3 gradient correctness", gradient_correctness},
      {"4 closed-form probes", closed_form_probes},
      {"5 hand-computed constants", hand_constants},
      {"6 multiplicity experiment", multiplicity},
      {"7 varphi chain bound", varphi_chain},
      {"8 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
