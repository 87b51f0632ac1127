#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "h2sched/mip.hpp"
#include "h2sched/model.hpp"

namespace h2sched {

// One experiment: a fleet layout, a curve source, a segment count, and a
// market file, plus solver options.
struct ScenarioConfig {
  std::string market_file;
  std::string curve_file;  // empty: use the parametric reference curve
  double alpha = 22.0;
  double beta = 6.0;
  double gamma = 0.54;
  double x_min = 0.10;
  int n_segments = 88;

  int n_modules = 1;
  double module_capacity_mw = 100.0;
  double c_min_fraction = 0.10;
  double ramp_fraction = 0.15;
  double startup_energy_fraction = 0.01;
  double hydrogen_price_usd_per_kg = 2.0;

  std::vector<std::uint8_t> initial_on;
  std::vector<double> initial_power_mw;

  bool day_split = false;
  MipOptions solver;
  std::string label;

  std::string effective_label() const;
};

// Key = value scenario file; '#' starts a comment. Unknown keys are errors.
ScenarioConfig parse_scenario_config(std::istream& in);

struct ScenarioResult {
  // configuration echo
  std::string label;
  std::string market_file;
  int n_modules = 0;
  double module_capacity_mw = 0.0;
  int n_segments = 0;  // segment count requested from the fit
  int horizon = 0;
  double hydrogen_price_usd_per_kg = 0.0;

  // totals
  double total_power_mwh = 0.0;
  double total_hydrogen_kg = 0.0;
  double total_revenue_usd = 0.0;
  double grid_revenue_usd = 0.0;
  double hydrogen_revenue_usd = 0.0;

  // per-hour series
  std::vector<double> p_grid_mw;
  std::vector<double> p_e_total_mw;
  std::vector<double> h_total_kg;
  std::vector<double> price_usd_mwh;

  Schedule schedule;

  // solve statistics
  MipStatus status = MipStatus::kInfeasible;
  double gap = 0.0;
  double best_bound_usd = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  double wall_seconds = 0.0;
};

// Builds curve -> PWL -> problem -> MILP -> solve -> verify -> metrics.
// Throws if the solve fails or the incumbent does not pass the independent
// feasibility audit.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Same pipeline on an already-loaded market series (used by tests and the
// acceptance suite to avoid re-reading files).
ScenarioResult run_scenario(const ScenarioConfig& config,
                            const MarketSeries& market);

struct ComparisonRow {
  int n_modules = 0;
  double module_capacity_mw = 0.0;
  double total_power_mwh = 0.0;
  double pct_power = 0.0;
  double total_hydrogen_kg = 0.0;
  double pct_hydrogen = 0.0;
  double total_revenue_usd = 0.0;
  double pct_revenue = 0.0;
};

// Percent increases against the fewest-modules row. All results must share
// the market, horizon, segment count, and total capacity.
struct ComparisonTable {
  std::vector<ComparisonRow> rows;
};

ComparisonTable compare_configurations(
    const std::vector<ScenarioResult>& results);

struct HourDetailRow {
  int n_segments = 0;
  int n_modules = 0;
  double module_capacity_mw = 0.0;
  double power_mw = 0.0;
  double hydrogen_kg = 0.0;
  double hydrogen_profit_usd = 0.0;   // hydrogen revenue only
  double total_profit_usd = 0.0;      // including grid sales that hour
};

// Per-configuration snapshot of one hour across segment counts.
std::vector<HourDetailRow> hour_detail(
    const std::vector<ScenarioResult>& results, int hour);

// File emission. Paths are created inside `out_dir`; writes are atomic
// (temp file + rename). Returns the paths written.
std::vector<std::string> emit_outputs(const ScenarioResult& result,
                                      const std::string& out_dir,
                                      bool csv = true, bool json = true);
std::string emit_comparison_csv(const ComparisonTable& table,
                                const std::string& out_dir);

std::string scenario_metrics_json(const ScenarioResult& result);
ScenarioResult scenario_metrics_from_json(const std::string& text);

void print_comparison(const ComparisonTable& table, std::ostream& out);
void print_hour_detail(const std::vector<HourDetailRow>& rows,
                       std::ostream& out);

}  // namespace h2sched
