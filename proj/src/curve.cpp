#include "h2sched/curve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include "h2sched/csv.hpp"

namespace h2sched {

namespace {

constexpr double kConcavityTol = 1e-9;   // accepted secant-slope increase
constexpr double kRangeTol = 1e-12;

}  // namespace

ProductionCurve ProductionCurve::from_samples(Eigen::ArrayXd x,
                                              Eigen::ArrayXd h_norm,
                                              double x_min,
                                              CurveSource source) {
  const Eigen::Index n = x.size();
  if (n != h_norm.size()) {
    throw ValidationError("curve sample arrays differ in length");
  }
  if (n < 3) {
    throw ValidationError("too few samples: a curve needs at least 3 points");
  }
  if (!(x_min > 0.0) || !(x_min < 1.0)) {
    throw ValidationError("x_min must lie in (0, 1)");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const int row = static_cast<int>(i) + 1;
    if (!std::isfinite(x[i]) || !std::isfinite(h_norm[i])) {
      throw ValidationError("non-finite value in curve sample row " +
                                std::to_string(row),
                            row);
    }
    if (x[i] < x_min - kRangeTol || x[i] > 1.0 + kRangeTol) {
      throw ValidationError("load fraction " + std::to_string(x[i]) +
                                " outside [x_min, 1] in row " +
                                std::to_string(row),
                            row);
    }
    if (!(h_norm[i] > 0.0)) {
      throw ValidationError("non-positive production in row " +
                                std::to_string(row),
                            row);
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw ValidationError("load fractions not strictly increasing at row " +
                                std::to_string(row),
                            row);
    }
  }
  // Concavity: secant slopes must not increase (up to numerical noise).
  double prev_slope = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double slope = (h_norm[i] - h_norm[i - 1]) / (x[i] - x[i - 1]);
    if (slope > prev_slope + kConcavityTol) {
      const int row = static_cast<int>(i) + 1;
      throw ValidationError(
          "curve is not concave: secant slope increases at row " +
              std::to_string(row),
          row);
    }
    prev_slope = slope;
  }
  // The specific production h/x must peak strictly inside the range.
  Eigen::Index best = 0;
  double best_eff = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double eff = h_norm[i] / x[i];
    if (eff > best_eff) {
      best_eff = eff;
      best = i;
    }
  }
  if (best == 0 || best == n - 1) {
    throw ValidationError(
        "specific production peaks at the range boundary; an interior "
        "efficiency peak is required");
  }
  return ProductionCurve(std::move(x), std::move(h_norm), x_min, source);
}

double ProductionCurve::value(double x) const {
  if (x < x_min_ - kRangeTol || x > 1.0 + kRangeTol) {
    throw ValidationError("curve evaluated outside [x_min, 1]: x = " +
                          std::to_string(x));
  }
  x = std::clamp(x, x_[0], x_[x_.size() - 1]);
  const double* begin = x_.data();
  const double* end = begin + x_.size();
  const double* it = std::lower_bound(begin, end, x);
  Eigen::Index hi = it - begin;
  if (hi == 0) return h_[0];
  if (hi >= x_.size()) return h_[x_.size() - 1];
  const Eigen::Index lo = hi - 1;
  const double w = (x - x_[lo]) / (x_[hi] - x_[lo]);
  return (1.0 - w) * h_[lo] + w * h_[hi];
}

double ProductionCurve::peak_specific_load() const {
  Eigen::Index best = 0;
  double best_eff = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    const double eff = h_[i] / x_[i];
    if (eff > best_eff) {
      best_eff = eff;
      best = i;
    }
  }
  return x_[best];
}

ProductionCurve reference_curve(double alpha, double beta, double gamma,
                                double x_min, int n_samples) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0)) {
    throw ValidationError("reference curve needs alpha, beta, gamma > 0");
  }
  if (n_samples < 1000) {
    throw ValidationError("reference curve must be sampled with >= 1000 points");
  }
  const double x_peak = std::sqrt(gamma / beta);
  if (!(x_min > 0.0) || !(x_min < x_peak) || !(x_peak < 1.0)) {
    throw ValidationError(
        "efficiency peak sqrt(gamma/beta) must lie strictly inside "
        "(x_min, 1)");
  }
  const double h_at_min = alpha * x_min - beta * x_min * x_min - gamma;
  if (!(h_at_min > 0.0)) {
    throw ValidationError(
        "curve is non-positive at x_min; pick parameters with "
        "alpha*x_min - beta*x_min^2 - gamma > 0");
  }
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(n_samples, x_min, 1.0);
  Eigen::ArrayXd h = alpha * x - beta * x.square() - gamma;
  return ProductionCurve::from_samples(std::move(x), std::move(h), x_min,
                                       CurveSource::kReferenceParametric);
}

ProductionCurve load_curve_points(std::istream& in) {
  CsvReader reader(in, {"load_fraction", "h_norm_kg_per_hour_per_mw"});
  std::vector<double> xs;
  std::vector<double> hs;
  while (reader.next_row()) {
    xs.push_back(reader.number(0));
    hs.push_back(reader.number(1));
  }
  if (xs.size() < 3) {
    throw ValidationError("too few samples: a curve needs at least 3 points");
  }
  Eigen::ArrayXd x = Eigen::Map<Eigen::ArrayXd>(xs.data(), xs.size());
  Eigen::ArrayXd h = Eigen::Map<Eigen::ArrayXd>(hs.data(), hs.size());
  const double x_min = x[0];
  return ProductionCurve::from_samples(std::move(x), std::move(h), x_min,
                                       CurveSource::kUserFile);
}

PwlCurve::PwlCurve(std::vector<PwlSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw ValidationError("a PWL curve needs at least one segment");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (!std::isfinite(segments_[i].slope) ||
        !std::isfinite(segments_[i].intercept_norm)) {
      throw ValidationError("non-finite PWL coefficient");
    }
    if (i > 0 && !(segments_[i].slope < segments_[i - 1].slope)) {
      throw ValidationError("PWL slopes must be strictly decreasing");
    }
  }
}

PwlCurve fit_concave_pwl(const ProductionCurve& curve, int n_segments,
                         double c_max_mw) {
  if (n_segments < 1) {
    throw ValidationError("n_segments must be >= 1");
  }
  if (!(c_max_mw > 0.0)) {
    throw ValidationError("module capacity must be positive");
  }
  const double x_min = curve.x_min();
  const int n_breaks = n_segments + 1;

  std::vector<double> bx(n_breaks);
  std::vector<double> bh(n_breaks);
  for (int k = 0; k < n_breaks; ++k) {
    const double x = x_min + (1.0 - x_min) * static_cast<double>(k) /
                                 static_cast<double>(n_segments);
    bx[k] = x;
    bh[k] = curve.value(x);
  }

  std::vector<PwlSegment> segments;
  segments.reserve(static_cast<std::size_t>(n_segments) + 1);
  for (int k = 0; k + 1 < n_breaks; ++k) {
    const double a = (bh[k + 1] - bh[k]) / (bx[k + 1] - bx[k]);
    if (!(a > 0.0)) {
      throw ValidationError(
          "production curve is non-increasing over a breakpoint span; "
          "cannot model it as a non-decreasing envelope");
    }
    const double b = bh[k] - a * bx[k];
    // Concavity of the samples makes secant slopes non-increasing; merge
    // collinear spans so the stored slopes decrease strictly.
    if (!segments.empty() && a >= segments.back().slope - 1e-12) {
      continue;
    }
    segments.push_back({a, b});
  }

  // Origin tangent of the envelope: the steepest line through (0, 0) that
  // nowhere cuts below the secant chain on [x_min, 1]. Its slope is the best
  // specific production among the breakpoints and it supports the envelope
  // at that breakpoint.
  double anchor_slope = 0.0;
  for (int k = 0; k < n_breaks; ++k) {
    anchor_slope = std::max(anchor_slope, bh[k] / bx[k]);
  }
  const bool have_origin_segment =
      std::any_of(segments.begin(), segments.end(), [&](const PwlSegment& s) {
        return std::abs(s.slope - anchor_slope) < 1e-12;
      });
  if (!have_origin_segment) {
    PwlSegment anchor{anchor_slope, 0.0};
    auto pos = std::lower_bound(
        segments.begin(), segments.end(), anchor,
        [](const PwlSegment& lhs, const PwlSegment& rhs) {
          return lhs.slope > rhs.slope;
        });
    segments.insert(pos, anchor);
  }
  return PwlCurve(std::move(segments));
}

double eval_pwl(const PwlCurve& pwl, double power_mw, double c_max_mw) {
  if (!(c_max_mw > 0.0)) {
    throw ValidationError("module capacity must be positive");
  }
  if (power_mw < -kRangeTol || power_mw > c_max_mw * (1.0 + 1e-12)) {
    throw ValidationError("power " + std::to_string(power_mw) +
                          " outside [0, c_max]");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const PwlSegment& s : pwl.segments()) {
    best = std::min(best, s.slope * power_mw + s.intercept_norm * c_max_mw);
  }
  return std::max(0.0, best);
}

double efficiency(const PwlCurve& pwl, double power_mw, double c_max_mw) {
  if (!(power_mw > 0.0)) {
    throw ValidationError("efficiency is undefined at zero power");
  }
  return eval_pwl(pwl, power_mw, c_max_mw) / power_mw;
}

}  // namespace h2sched
