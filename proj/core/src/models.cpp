// SPDX-License-Identifier: Apache-2.0
#include "graphvar/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "graphvar/errors.hpp"
#include "graphvar/numeric.hpp"
#include "json.hpp"

namespace graphvar {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double weight_integral(const NonlinearityModel& model, const WeightedGraph& g,
                       std::span<const VertexIndex> active) {
  CompensatedSum s;
  for (VertexIndex x : active) s += g.mu(x) * model.weight(x);
  return s.value();
}

/// Asymptotic coefficient of c |s|^r / |s|^e: +inf, c, or 0.
double power_limit(double c, double r, double e) {
  if (c == 0.0) return 0.0;
  if (r > e) return kInf;
  if (r == e) return c;
  return 0.0;
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

class SeparablePowerModel final : public NonlinearityModel {
 public:
  SeparablePowerModel(std::string name, PowerParams p, std::vector<double> weights, int arity)
      : name_(std::move(name)), p_(p), weights_(std::move(weights)), arity_(arity) {
    if (arity_ != 1 && arity_ != 2) throw ParseError("model arity must be 1 or 2");
    if (!(p_.r1 > 1.0) || (arity_ == 2 && !(p_.r2 > 1.0))) {
      throw ParseError("power exponents must exceed 1 for continuous differentiability");
    }
    for (double w : weights_) {
      if (!(std::isfinite(w) && w >= 0.0)) throw ParseError("weights b(x) must be finite and >= 0");
    }
  }

  std::string name() const override { return name_; }
  int arity() const override { return arity_; }

  double weight(VertexIndex x) const override { return weights_.empty() ? 1.0 : weights_.at(x); }

  double value(VertexIndex x, double s, double t) const override {
    double f = p_.c1 * std::pow(std::abs(s), p_.r1);
    if (arity_ == 2) f += p_.c2 * std::pow(std::abs(t), p_.r2);
    return weight(x) * f;
  }
  double ds(VertexIndex x, double s, double) const override {
    return weight(x) * p_.c1 * p_.r1 * signed_pow(s, p_.r1 - 1.0);
  }
  double dt(VertexIndex x, double, double t) const override {
    if (arity_ == 1) return 0.0;
    return weight(x) * p_.c2 * p_.r2 * signed_pow(t, p_.r2 - 1.0);
  }

  std::optional<GrowthTargets> growth_targets(const WeightedGraph& g,
                                              std::span<const VertexIndex> active, double p,
                                              double q, int arity) const override {
    if (p_.c1 < 0.0 || p_.c2 < 0.0) return std::nullopt;
    const double W = weight_integral(*this, g, active);
    GrowthTargets out;
    out.provenance = "closed_form";
    if (arity == 1 || arity_ == 1) {
      const double a = power_limit(p_.c1, p_.r1, p);
      out.A = a * W;
      out.B = a * W;
      return out;
    }
    const double delta = std::min(p, q);
    // Ball maximum is max(c1 y^r1, c2 y^r2), attained at a corner.
    const double a1 = power_limit(p_.c1, p_.r1, delta);
    const double a2 = power_limit(p_.c2, p_.r2, delta);
    out.A = std::max(a1, a2) * W;
    const double b1 = power_limit(p_.c1, p_.r1, p);
    const double b2 = power_limit(p_.c2, p_.r2, q);
    out.B = std::max(b1, b2) * W;
    return out;
  }

  std::string params_json() const override {
    json j{{"c1", p_.c1}, {"r1", p_.r1}, {"c2", p_.c2}, {"r2", p_.r2}, {"arity", arity_}};
    if (!weights_.empty()) j["b"] = weights_;
    return j.dump();
  }

 private:
  std::string name_;
  PowerParams p_;
  std::vector<double> weights_;
  int arity_;
};

class PlateauOscillatorModel final : public NonlinearityModel {
 public:
  PlateauOscillatorModel(PlateauParams p, std::vector<double> weights, int arity)
      : profile_(p), weights_(std::move(weights)), arity_(arity) {
    if (arity_ != 1 && arity_ != 2) throw ParseError("model arity must be 1 or 2");
    if (!(p.p >= 1.0) || !(p.q >= 1.0)) throw ParseError("plateau exponents must be >= 1");
    for (double w : weights_) {
      if (!(std::isfinite(w) && w >= 0.0)) throw ParseError("weights b(x) must be finite and >= 0");
    }
    bounds_ = profile_.asymptotic_ratio_bounds();
  }

  std::string name() const override { return "plateau_oscillator"; }
  int arity() const override { return arity_; }
  double weight(VertexIndex x) const override { return weights_.empty() ? 1.0 : weights_.at(x); }

  double radial(double s, double t) const {
    const auto& p = profile_.params();
    double r = std::pow(std::abs(s), p.p);
    if (arity_ == 2) r += std::pow(std::abs(t), p.q);
    return r;
  }

  double value(VertexIndex x, double s, double t) const override {
    return weight(x) * profile_.theta(radial(s, t));
  }
  double ds(VertexIndex x, double s, double t) const override {
    const auto& p = profile_.params();
    return weight(x) * profile_.dtheta(radial(s, t)) * p.p * signed_pow(s, p.p - 1.0);
  }
  double dt(VertexIndex x, double s, double t) const override {
    if (arity_ == 1) return 0.0;
    const auto& p = profile_.params();
    return weight(x) * profile_.dtheta(radial(s, t)) * p.q * signed_pow(t, p.q - 1.0);
  }

  std::optional<GrowthTargets> growth_targets(const WeightedGraph& g,
                                              std::span<const VertexIndex> active, double p,
                                              double q, int arity) const override {
    const auto& mp = profile_.params();
    const bool scalar = arity == 1 || arity_ == 1;
    // theta(r)/r oscillates between the two bounds, so A and B follow only
    // when the model's radial exponents match the system exponents.
    if (scalar ? mp.p != p : (mp.p != p || mp.q != q || p != q)) return std::nullopt;
    const double W = weight_integral(*this, g, active);
    return GrowthTargets{bounds_.first * W, bounds_.second * W, "oracle"};
  }

  std::vector<std::pair<double, double>> candidate_points(double y) const override {
    return {{y, 0.0}, {-y, 0.0}, {0.0, y}, {0.0, -y}};
  }

  std::string params_json() const override {
    const auto& p = profile_.params();
    json j{{"beta", p.beta}, {"c", p.c},       {"a0", p.a0},      {"smooth", p.smooth},
           {"p", p.p},       {"q", p.q},       {"arity", arity_}, {"ratio_liminf", bounds_.first},
           {"ratio_limsup", bounds_.second}};
    if (!weights_.empty()) j["b"] = weights_;
    return j.dump();
  }

 private:
  PlateauProfile profile_;
  std::vector<double> weights_;
  int arity_;
  std::pair<double, double> bounds_;
};

}  // namespace

// PlateauProfile --------------------------------------------------------------

PlateauProfile::PlateauProfile(const PlateauParams& params) : params_(params) {
  const double c = params_.c;
  const double k = params_.smooth;
  if (!(params_.beta > 0.0)) throw ParseError("plateau beta must be positive");
  if (!(c > 1.0)) throw ParseError("plateau ratio c must exceed 1");
  if (!(params_.a0 > 0.0)) throw ParseError("plateau a0 must be positive");
  if (!(k > 0.0 && k < (c - 1.0) / (c + 1.0))) {
    throw ParseError("plateau smoothing must lie in (0, (c-1)/(c+1))");
  }
  const double a0 = params_.a0;
  head_ = build({{0.0, 1.0}, {a0 * (1.0 - k), 1.0}, {a0, 0.5}});
  period_ = build({{1.0, 0.5},
                   {1.0 + k, 0.0},
                   {c * (1.0 - k), 0.0},
                   {c * (1.0 + k), 1.0},
                   {c * c * (1.0 - k), 1.0},
                   {c * c, 0.5}});
  head_total_ = head_.back().cum;
  period_total_ = period_.back().cum;
}

std::vector<PlateauProfile::Knot> PlateauProfile::build(std::vector<std::pair<double, double>> pts) {
  std::vector<Knot> out;
  out.reserve(pts.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) cum += 0.5 * (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second);
    out.push_back({pts[i].first, pts[i].second, cum});
  }
  return out;
}

double PlateauProfile::value_at(const std::vector<Knot>& knots, double x) {
  if (x <= knots.front().x) return knots.front().y;
  if (x >= knots.back().x) return knots.back().y;
  auto it = std::upper_bound(knots.begin(), knots.end(), x,
                             [](double v, const Knot& kn) { return v < kn.x; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

double PlateauProfile::integral_to(const std::vector<Knot>& knots, double x) {
  if (x <= knots.front().x) return 0.0;
  if (x >= knots.back().x) return knots.back().cum;
  auto it = std::upper_bound(knots.begin(), knots.end(), x,
                             [](double v, const Knot& kn) { return v < kn.x; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double yx = lo.y + (x - lo.x) / (hi.x - lo.x) * (hi.y - lo.y);
  return lo.cum + 0.5 * (x - lo.x) * (lo.y + yx);
}

namespace {

/// Period index k with a0 c^{2k} <= r < a0 c^{2k+2}, for r >= a0.
int period_index(double r, double a0, double c2) {
  int k = static_cast<int>(std::floor(std::log(r / a0) / std::log(c2)));
  k = std::max(k, 0);
  while (k > 0 && a0 * std::pow(c2, k) > r) --k;
  while (a0 * std::pow(c2, k + 1) <= r) ++k;
  return k;
}

}  // namespace

double PlateauProfile::theta(double r) const {
  const double a0 = params_.a0;
  if (r <= 0.0) return 0.0;
  if (r < a0) return params_.beta * integral_to(head_, r);
  const double c2 = params_.c * params_.c;
  const int k = period_index(r, a0, c2);
  const double ck = std::pow(c2, k);
  const double ak = a0 * ck;
  const double before = head_total_ + period_total_ * a0 * (ck - 1.0) / (c2 - 1.0);
  return params_.beta * (before + ak * integral_to(period_, r / ak));
}

double PlateauProfile::dtheta(double r) const {
  const double a0 = params_.a0;
  if (r <= 0.0) return params_.beta;
  if (r < a0) return params_.beta * value_at(head_, r);
  const double c2 = params_.c * params_.c;
  const int k = period_index(r, a0, c2);
  const double ak = a0 * std::pow(c2, k);
  return params_.beta * value_at(period_, r / ak);
}

std::pair<double, double> PlateauProfile::asymptotic_ratio_bounds(int samples) const {
  // Far enough out that the head's contribution is below double precision.
  const double c2 = params_.c * params_.c;
  const int k = std::max(4, static_cast<int>(std::ceil(18.0 / std::log10(c2))));
  const double ak = params_.a0 * std::pow(c2, k);
  double lo = kInf;
  double hi = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = ak * std::pow(c2, static_cast<double>(i) / (samples - 1));
    const double ratio = theta(r) / r;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

// Factories --------------------------------------------------------------------

ModelPtr make_power_model(PowerParams params, int arity) {
  return std::make_shared<SeparablePowerModel>("power", params, std::vector<double>{}, arity);
}

ModelPtr make_separable_model(PowerParams params, std::vector<double> weights, int arity) {
  return std::make_shared<SeparablePowerModel>("separable", params, std::move(weights), arity);
}

ModelPtr make_plateau_oscillator(PlateauParams params, std::vector<double> weights, int arity) {
  return std::make_shared<PlateauOscillatorModel>(params, std::move(weights), arity);
}

namespace {

double param(const json& params, const char* key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (!it->is_number()) throw ParseError(std::string("model parameter '") + key + "' must be a number");
  return it->get<double>();
}

std::vector<double> vertex_weights(const json& params, const WeightedGraph& g) {
  auto it = params.find("b");
  if (it == params.end()) return {};
  if (it->is_number()) return std::vector<double>(g.size(), it->get<double>());
  if (!it->is_object()) throw ParseError("model parameter 'b' must be a number or an {id: value} map");
  std::vector<double> w(g.size(), 1.0);
  for (auto kv = it->begin(); kv != it->end(); ++kv) {
    if (!g.contains(kv.key())) throw ParseError("weight for unknown vertex '" + kv.key() + "'");
    if (!kv.value().is_number()) throw ParseError("weights must be numbers");
    w[g.index(kv.key())] = kv.value().get<double>();
  }
  return w;
}

}  // namespace

ModelPtr make_model(std::string_view json_text, const WeightedGraph& g, int arity) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model spec must be an object");
  if (doc.contains("table")) throw ParseError("tabulated nonlinearities are not supported; use a catalog model");
  if (!doc.contains("catalog") || !doc["catalog"].is_string()) {
    throw ParseError("model spec needs a 'catalog' name");
  }
  const std::string name = doc["catalog"].get<std::string>();
  for (const auto& kv : doc.items()) {
    if (kv.key() != "catalog" && kv.key() != "params") {
      throw ParseError("unknown model key '" + kv.key() + "'");
    }
  }
  const json params = doc.value("params", json::object());
  if (!params.is_object()) throw ParseError("model 'params' must be an object");
  const auto only = [&](std::initializer_list<std::string_view> keys) {
    for (const auto& kv : params.items()) {
      if (std::find(keys.begin(), keys.end(), kv.key()) == keys.end()) {
        throw ParseError("unknown parameter '" + kv.key() + "' for catalog model '" + name + "'");
      }
    }
  };

  if (name == "power" || name == "separable") {
    only({"c1", "alpha", "c2", "beta", "r1", "r2", "b"});
    PowerParams p;
    p.c1 = param(params, "c1", param(params, "alpha", 1.0));
    p.c2 = param(params, "c2", param(params, "beta", 1.0));
    p.r1 = param(params, "r1", 2.0);
    p.r2 = param(params, "r2", 2.0);
    if (name == "power") {
      if (params.contains("b")) throw ParseError("the power model has no vertex weights; use 'separable'");
      return make_power_model(p, arity);
    }
    return make_separable_model(p, vertex_weights(params, g), arity);
  }
  if (name == "plateau_oscillator") {
    only({"beta", "c", "a0", "smooth", "p", "q", "b"});
    PlateauParams p;
    p.beta = param(params, "beta", p.beta);
    p.c = param(params, "c", p.c);
    p.a0 = param(params, "a0", p.a0);
    p.smooth = param(params, "smooth", p.smooth);
    p.p = param(params, "p", p.p);
    p.q = param(params, "q", p.q);
    return make_plateau_oscillator(p, vertex_weights(params, g), arity);
  }
  throw ParseError("unknown catalog model '" + name + "'");
}

void check_model_registration(const NonlinearityModel& model, const WeightedGraph& g,
                              std::span<const VertexIndex> active) {
  CompensatedSum at_origin;
  CompensatedSum scale;
  for (VertexIndex x : active) {
    const double f0 = model.value(x, 0.0, 0.0);
    at_origin += g.mu(x) * f0;
    scale += g.mu(x) * std::abs(f0);
  }
  if (std::abs(at_origin.value()) > 1e-12 * std::max(1.0, scale.value())) {
    throw HypothesisError("integral of F(x,0,0) over the active set is " +
                          format_double(at_origin.value()) + ", not 0");
  }
  if (!std::isfinite(weight_integral(model, g, active))) {
    throw HypothesisError("weight b(x) is not integrable on the active set");
  }
}

double partials_mismatch(const NonlinearityModel& model, const WeightedGraph& g, int probes,
                         double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> vertex(0, g.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const VertexIndex x = vertex(rng);
    const double s = scale * unit(rng);
    const double t = model.arity() == 2 ? scale * unit(rng) : 0.0;
    const double hs = 1e-6 * std::max(1.0, std::abs(s));
    const double fd_s = (model.value(x, s + hs, t) - model.value(x, s - hs, t)) / (2.0 * hs);
    const double an_s = model.ds(x, s, t);
    worst = std::max(worst, std::abs(fd_s - an_s) / std::max({1.0, std::abs(an_s), std::abs(fd_s)}));
    if (model.arity() == 2) {
      const double ht = 1e-6 * std::max(1.0, std::abs(t));
      const double fd_t = (model.value(x, s, t + ht) - model.value(x, s, t - ht)) / (2.0 * ht);
      const double an_t = model.dt(x, s, t);
      worst = std::max(worst,
                       std::abs(fd_t - an_t) / std::max({1.0, std::abs(an_t), std::abs(fd_t)}));
    }
  }
  return worst;
}

// Growth estimators ------------------------------------------------------------

std::vector<double> geometric_radii(double from, double to, int count) {
  if (!(from > 0.0) || !(to > from) || count < 3) {
    throw ParameterError("geometric radii need 0 < from < to and count >= 3");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = from * std::pow(to / from, static_cast<double>(i) / (count - 1));
  }
  return out;
}

std::vector<std::pair<double, double>> default_rays(int count) {
  const int n = std::max(8, (count + 7) / 8 * 8);
  std::vector<std::pair<double, double>> rays;
  rays.reserve(static_cast<std::size_t>(n));
  // Walk the l1 circle |s| + |t| = 1 at even arc-length spacing.
  for (int i = 0; i < n; ++i) {
    const double tau = 4.0 * i / n;
    const int side = static_cast<int>(tau);
    const double f = tau - side;
    switch (side) {
      case 0: rays.emplace_back(1.0 - f, f); break;
      case 1: rays.emplace_back(-f, 1.0 - f); break;
      case 2: rays.emplace_back(-(1.0 - f), -f); break;
      default: rays.emplace_back(f, -(1.0 - f)); break;
    }
  }
  return rays;
}

namespace {

void check_radii(std::span<const double> radii) {
  if (radii.size() < 3) throw ParameterError("growth estimates need at least 3 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ParameterError("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ParameterError("radii must be strictly increasing");
  }
}

std::size_t tail_start(std::size_t n) { return n - (n + 1) / 2; }

}  // namespace

GrowthEstimate estimate_A(const NonlinearityModel& model, const WeightedGraph& g,
                          std::span<const VertexIndex> active, double delta,
                          std::span<const double> radii, int grid) {
  check_radii(radii);
  if (grid < 64) throw ParameterError("ball sampling needs at least 64 points per shell");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  constexpr int kShells = 16;

  GrowthEstimate out;
  for (double y : radii) {
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
    for (int j = 1; j <= kShells; ++j) {
      const double rj = y * j / kShells;
      if (model.arity() == 1) {
        for (int i = 0; i <= grid / 2; ++i) {
          const double s = rj * (2.0 * i / (grid / 2) - 1.0);
          pts.emplace_back(s, 0.0);
        }
      } else {
        for (const auto& [ds, dt] : default_rays(grid)) pts.emplace_back(rj * ds, rj * dt);
      }
    }
    for (const auto& c : model.candidate_points(y)) {
      if (model.arity() == 1) {
        if (std::abs(c.first) <= y) pts.emplace_back(c.first, 0.0);
      } else if (std::abs(c.first) + std::abs(c.second) <= y * (1.0 + 1e-15)) {
        pts.push_back(c);
      }
    }
    CompensatedSum integral;
    for (VertexIndex x : active) {
      double best = -kInf;
      for (const auto& [s, t] : pts) best = std::max(best, model.value(x, s, t));
      integral += g.mu(x) * best;
    }
    out.table.push_back({y, integral.value() / std::pow(y, delta), -1});
  }
  double est = kInf;
  for (std::size_t i = tail_start(out.table.size()); i < out.table.size(); ++i) {
    est = std::min(est, out.table[i].ratio);
  }
  out.estimate = est;
  return out;
}

GrowthEstimate estimate_B(const NonlinearityModel& model, const WeightedGraph& g,
                          std::span<const VertexIndex> active, double p, double q,
                          std::span<const std::pair<double, double>> rays,
                          std::span<const double> radii) {
  check_radii(radii);
  if (rays.empty()) throw ParameterError("estimate_B needs at least one ray");
  GrowthEstimate out;
  double est = -kInf;
  const std::size_t tail = tail_start(radii.size());
  for (std::size_t r = 0; r < rays.size(); ++r) {
    double ds = rays[r].first;
    double dt = model.arity() == 1 ? 0.0 : rays[r].second;
    if (model.arity() == 1) {
      if (ds == 0.0) continue;
      ds = ds > 0.0 ? 1.0 : -1.0;
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double s = radii[i] * ds;
      const double t = radii[i] * dt;
      CompensatedSum integral;
      for (VertexIndex x : active) integral += g.mu(x) * model.value(x, s, t);
      double denom = std::pow(std::abs(s), p);
      if (model.arity() == 2) denom += std::pow(std::abs(t), q);
      const double ratio = integral.value() / denom;
      out.table.push_back({radii[i], ratio, static_cast<int>(r)});
      if (i >= tail) est = std::max(est, ratio);
    }
  }
  out.estimate = est;
  return out;
}

}  // namespace graphvar
