#pragma once

#include <functional>
#include <random>
#include <vector>

#include "h2sched/curve.hpp"
#include "h2sched/market.hpp"
#include "h2sched/model.hpp"

namespace h2sched::testing {

// Hourly market built from lambdas: price(t), wind hsl(t). Bid price is set
// above the cleared price so the full availability is sellable unless a
// cleared award is supplied.
inline MarketSeries make_market(
    int horizon, const std::function<double(int)>& price,
    const std::function<double(int)>& hsl,
    const std::function<double(int)>& cleared_power = nullptr) {
  MarketSeries series;
  for (int t = 0; t < horizon; ++t) {
    MarketRecord r;
    r.hour = t;
    r.cleared_price = price(t);
    r.hsl = hsl(t);
    r.lsl = 0.0;
    if (cleared_power) {
      r.bid_price = r.cleared_price - 1.0;  // cleared branch
      r.cleared_power = std::min(cleared_power(t), r.hsl);
    } else {
      r.bid_price = r.cleared_price + 1.0;  // availability branch
      r.cleared_power = r.hsl;
    }
    series.records.push_back(r);
  }
  return series;
}

inline FleetConfig make_fleet(int n_modules, double c_max) {
  FleetConfig fleet;
  fleet.n_modules = n_modules;
  fleet.spec.c_max_mw = c_max;
  return fleet;
}

inline ScheduleProblem make_problem(
    int horizon, int n_modules, double c_max, int n_segments,
    const std::function<double(int)>& price,
    const std::function<double(int)>& hsl) {
  const ProductionCurve curve = reference_curve();
  return build_problem(make_market(horizon, price, hsl),
                       make_fleet(n_modules, c_max),
                       fit_concave_pwl(curve, n_segments, c_max));
}

// Random small instance for oracle-equivalence checks: mixed price signs,
// wind between zero and well above fleet capacity, and both export-limit
// branches exercised.
template <typename Rng>
ScheduleProblem random_problem(Rng& rng, int horizon, int n_modules,
                               int n_segments) {
  std::uniform_real_distribution<double> price(-10.0, 60.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double c_max = std::uniform_real_distribution<double>(4.0, 30.0)(rng);
  const double fleet_cap = c_max * n_modules;
  MarketSeries series;
  for (int t = 0; t < horizon; ++t) {
    MarketRecord r;
    r.hour = t;
    r.cleared_price = price(rng);
    r.hsl = unit(rng) * 1.6 * fleet_cap;
    r.lsl = 0.0;
    r.cleared_power = unit(rng) * r.hsl;
    r.bid_price = r.cleared_price + (unit(rng) < 0.5 ? 5.0 : -5.0);
    series.records.push_back(r);
  }
  const ProductionCurve curve = reference_curve();
  return build_problem(series, make_fleet(n_modules, c_max),
                       fit_concave_pwl(curve, n_segments, c_max));
}

}  // namespace h2sched::testing
