#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "h2sched/error.hpp"

namespace h2sched {

enum class CurveSource { kReferenceParametric, kUserFile };

// Normalized hydrogen production curve of one electrolyzer module.
//
// Samples map load fraction x in [x_min, 1] to h_norm, the hydrogen rate in
// kg/h per MW of module capacity. A module of capacity C consuming power p
// produces C * value(p / C) kg/h. Valid curves are concave in x, strictly
// positive, and have an interior maximum of the specific production h_norm/x
// (the efficiency peak).
class ProductionCurve {
 public:
  static ProductionCurve from_samples(Eigen::ArrayXd x, Eigen::ArrayXd h_norm,
                                      double x_min, CurveSource source);

  double x_min() const noexcept { return x_min_; }
  CurveSource source() const noexcept { return source_; }
  Eigen::Index n_samples() const noexcept { return x_.size(); }
  const Eigen::ArrayXd& x() const noexcept { return x_; }
  const Eigen::ArrayXd& h_norm() const noexcept { return h_; }

  // Piecewise-linear interpolation between samples. x must lie in
  // [x_min, 1]; the curve is never extrapolated.
  double value(double x) const;

  // Load fraction of the best sampled specific production h_norm/x.
  double peak_specific_load() const;

 private:
  ProductionCurve(Eigen::ArrayXd x, Eigen::ArrayXd h, double x_min,
                  CurveSource source)
      : x_(std::move(x)), h_(std::move(h)), x_min_(x_min), source_(source) {}

  Eigen::ArrayXd x_;
  Eigen::ArrayXd h_;
  double x_min_;
  CurveSource source_;
};

// Parametric stand-in curve h_norm(x) = alpha*x - beta*x^2 - gamma sampled on
// [x_min, 1]. Specific production peaks at x* = sqrt(gamma/beta), which must
// lie strictly inside (x_min, 1).
ProductionCurve reference_curve(double alpha = 22.0, double beta = 6.0,
                                double gamma = 0.54, double x_min = 0.10,
                                int n_samples = 1001);

// Reads a curve from CSV with header
//   load_fraction,h_norm_kg_per_hour_per_mw
// Rows must be sorted ascending by load fraction. Violations of the curve
// invariants raise ValidationError naming the offending row.
ProductionCurve load_curve_points(std::istream& in);

struct PwlSegment {
  double slope;           // a_i, kg/MWh
  double intercept_norm;  // b_i, dimensionless; scaled by module capacity
};

// Concave piecewise-linear envelope of a production curve.
//
// The segments are stored with strictly decreasing slopes and evaluate as the
// pointwise minimum of the lines a_i*p + b_i*c_max, clamped below at zero.
// Intercepts are normalized by module capacity, so one PwlCurve serves any
// module size. Exactly one segment passes through the origin (b = 0); it is
// the origin tangent of the envelope and forces h <= 0 for a module drawing
// no power.
class PwlCurve {
 public:
  explicit PwlCurve(std::vector<PwlSegment> segments);

  int n_segments() const noexcept { return static_cast<int>(segments_.size()); }
  const std::vector<PwlSegment>& segments() const noexcept { return segments_; }

 private:
  std::vector<PwlSegment> segments_;
};

// Fits the concave PWL envelope of `curve` with `n_segments` secants through
// breakpoints equally spaced in load fraction over [x_min, 1], plus the
// origin-anchored tangent segment. The result therefore has n_segments + 1
// segments (fewer if collinear secants merge). c_max only fixes the intended
// capacity scale; the returned coefficients are capacity-free.
PwlCurve fit_concave_pwl(const ProductionCurve& curve, int n_segments,
                         double c_max_mw);

// max(0, min_i(a_i * p + b_i * c_max)) in kg/h for 0 <= p <= c_max.
double eval_pwl(const PwlCurve& pwl, double power_mw, double c_max_mw);

// eval_pwl(p) / p in kg/MWh; rejects p <= 0.
double efficiency(const PwlCurve& pwl, double power_mw, double c_max_mw);

}  // namespace h2sched
