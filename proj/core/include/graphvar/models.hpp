// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphvar/graph.hpp"

namespace graphvar {

/// Limits A (liminf of the ball maximum) and B (limsup of the ratio) for a
/// model on a given active vertex set, with a note on how they were obtained.
struct GrowthTargets {
  double A = 0.0;
  double B = 0.0;
  std::string provenance;
};

/// Nonlinearity F(x, s, t) with its partial derivatives. Arity-1 models
/// ignore t. Implementations are pure and safe for concurrent use.
class NonlinearityModel {
 public:
  virtual ~NonlinearityModel() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual int arity() const = 0;
  [[nodiscard]] virtual double value(VertexIndex x, double s, double t) const = 0;
  [[nodiscard]] virtual double ds(VertexIndex x, double s, double t) const = 0;
  [[nodiscard]] virtual double dt(VertexIndex x, double s, double t) const = 0;

  /// Per-vertex factor b(x) of the growth bound |F|, |F_s|, |F_t| <= a(|(s,t)|) b(x).
  [[nodiscard]] virtual double weight(VertexIndex x) const = 0;

  /// Known A/B for system exponents p, q over `active`, when the model can
  /// state them (closed form or its own one-dimensional oracle).
  [[nodiscard]] virtual std::optional<GrowthTargets> growth_targets(
      const WeightedGraph& g, std::span<const VertexIndex> active, double p, double q,
      int arity) const = 0;

  /// Points (s, t) worth adding to the sampled ball maximum at radius y.
  [[nodiscard]] virtual std::vector<std::pair<double, double>> candidate_points(double y) const {
    (void)y;
    return {};
  }

  /// Parameters echoed into reports, as a JSON object literal.
  [[nodiscard]] virtual std::string params_json() const = 0;
};

using ModelPtr = std::shared_ptr<const NonlinearityModel>;

/// F = sum of per-channel powers c|s|^r, scaled by a per-vertex weight b(x):
///   F(x,s,t) = b(x) (c1 |s|^{r1} + c2 |t|^{r2}).
/// With b == 1 this is the `power` catalog item, otherwise `separable`.
struct PowerParams {
  double c1 = 1.0;
  double r1 = 2.0;
  double c2 = 1.0;
  double r2 = 2.0;
};

[[nodiscard]] ModelPtr make_power_model(PowerParams params, int arity = 2);
[[nodiscard]] ModelPtr make_separable_model(PowerParams params, std::vector<double> weights,
                                            int arity = 2);

/// Radial profile theta with slope beta on ramps and zero slope on the
/// plateaus [a_k, c a_k], a_k = a0 c^{2k}. Every slope change is spread
/// linearly over [b(1-smooth), b(1+smooth)] around its breakpoint b, so theta
/// is continuously differentiable.
struct PlateauParams {
  double beta = 1.0;
  double c = 30.0;
  double a0 = 1.0;
  double smooth = 0.05;
  double p = 2.0;  ///< F = b(x) theta(|s|^p + |t|^q)
  double q = 2.0;
};

class PlateauProfile {
 public:
  explicit PlateauProfile(const PlateauParams& params);

  [[nodiscard]] double theta(double r) const;
  [[nodiscard]] double dtheta(double r) const;
  [[nodiscard]] const PlateauParams& params() const noexcept { return params_; }

  /// liminf and limsup of theta(r)/r, from dense sampling of a far period.
  [[nodiscard]] std::pair<double, double> asymptotic_ratio_bounds(int samples = 20001) const;

 private:
  struct Knot {
    double x;
    double y;
    double cum;  ///< integral of the profile from the first knot to x
  };
  static std::vector<Knot> build(std::vector<std::pair<double, double>> pts);
  static double integral_to(const std::vector<Knot>& knots, double x);
  static double value_at(const std::vector<Knot>& knots, double x);

  PlateauParams params_;
  std::vector<Knot> head_;    ///< slope profile on [0, a0]
  std::vector<Knot> period_;  ///< normalized slope profile on [1, c^2]
  double head_total_ = 0.0;
  double period_total_ = 0.0;
};

[[nodiscard]] ModelPtr make_plateau_oscillator(PlateauParams params, std::vector<double> weights,
                                               int arity = 2);

/// Builds a catalog model from {"catalog": name, "params": {...}} JSON.
/// Per-vertex weights come from params.b as a number or an {id: value} map.
/// Throws ParseError for unknown catalog names, tables, or bad parameters.
[[nodiscard]] ModelPtr make_model(std::string_view json_text, const WeightedGraph& g, int arity);

/// Registration checks: the condition that F(x,0,0) integrates to
/// zero over `active`, and a finite weight integral. Throws HypothesisError.
void check_model_registration(const NonlinearityModel& model, const WeightedGraph& g,
                              std::span<const VertexIndex> active);

/// Largest relative mismatch between ds/dt and central differences of value
/// over `probes` random points with coordinates in [-scale, scale].
[[nodiscard]] double partials_mismatch(const NonlinearityModel& model, const WeightedGraph& g,
                                       int probes, double scale, std::uint64_t seed);

struct GrowthRow {
  double radius = 0.0;
  double ratio = 0.0;
  int ray = -1;  ///< ray index for B tables, -1 for A tables
};

struct GrowthEstimate {
  double estimate = 0.0;
  bool heuristic = true;
  std::vector<GrowthRow> table;
};

/// `count` radii geometrically spaced from `from` to `to`.
[[nodiscard]] std::vector<double> geometric_radii(double from, double to, int count);

/// Default ray set: `count` directions evenly spread over the unit l1 circle,
/// always including the axes and the diagonals (count is rounded up to a
/// multiple of 8).
[[nodiscard]] std::vector<std::pair<double, double>> default_rays(int count = 16);

/// liminf estimate of int_active max_{|s|+|t|<=y} F dmu / y^delta: the ball
/// maximum is sampled on concentric l1 shells with `grid` points each (plus
/// the model's candidate points), and the estimate is the minimum ratio over
/// the largest ceil(n/2) radii.
[[nodiscard]] GrowthEstimate estimate_A(const NonlinearityModel& model, const WeightedGraph& g,
                                        std::span<const VertexIndex> active, double delta,
                                        std::span<const double> radii, int grid = 64);

/// limsup estimate of int_active F(x,s,t) dmu / (|s|^p + |t|^q) along rays:
/// the maximum ratio over all rays and the largest ceil(n/2) radii.
[[nodiscard]] GrowthEstimate estimate_B(const NonlinearityModel& model, const WeightedGraph& g,
                                        std::span<const VertexIndex> active, double p, double q,
                                        std::span<const std::pair<double, double>> rays,
                                        std::span<const double> radii);

}  // namespace graphvar
