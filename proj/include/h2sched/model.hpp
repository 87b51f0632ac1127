#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "h2sched/curve.hpp"
#include "h2sched/market.hpp"

namespace h2sched {

// Parameters of one electrolyzer module. Fractions are relative to c_max so
// fleets of different module sizes stay directly comparable.
struct ElectrolyzerSpec {
  double c_max_mw = 0.0;
  double c_min_fraction = 0.10;
  double ramp_fraction = 0.15;             // per hour
  double startup_energy_fraction = 0.01;   // of c_max, consumed once per start
  double hydrogen_price_usd_per_kg = 2.0;

  double c_min_mw() const noexcept { return c_min_fraction * c_max_mw; }
  double ramp_mw() const noexcept { return ramp_fraction * c_max_mw; }
  double startup_energy_mwh() const noexcept {
    return startup_energy_fraction * c_max_mw;
  }

  void validate() const;
};

// A fleet of identical modules plus the plant state entering hour 0.
struct FleetConfig {
  int n_modules = 1;
  ElectrolyzerSpec spec;
  std::vector<std::uint8_t> initial_on;     // empty = all off
  std::vector<double> initial_power_mw;     // empty = all zero

  double total_capacity_mw() const noexcept {
    return spec.c_max_mw * n_modules;
  }

  void validate() const;
};

// Complete input of one scheduling run.
struct ScheduleProblem {
  MarketSeries market;
  FleetConfig fleet;
  PwlCurve pwl;
  std::vector<double> export_limit_mw;   // P_t^max
  std::vector<double> availability_mw;   // P_t^A

  int horizon() const noexcept { return market.horizon(); }
  int n_modules() const noexcept { return fleet.n_modules; }
};

ScheduleProblem build_problem(MarketSeries market, FleetConfig fleet,
                              PwlCurve pwl);

enum class RowFamily : std::uint8_t {
  kHydrogenCurve,
  kOperatingRange,
  kExportLimit,
  kRampUp,
  kRampDown,
  kStartupLogicA,
  kStartupLogicB,
  kStartupLogicC,
  kStartupCost,
  kPowerBalance,
};

const char* row_family_name(RowFamily family);

// One sparse constraint row: lower <= sum(coeff * var) <= upper.
struct MilpRow {
  RowFamily family;
  std::int32_t t = -1;
  std::int32_t m = -1;
  std::int32_t segment = -1;
  double lower;
  double upper;
  std::vector<std::pair<std::int32_t, double>> coeffs;
};

// Solver-facing form of the scheduling MILP. Variables are blocked by
// family: p_grid by hour, then h, p_e, p_su, z_on, z_su each indexed by
// t * M + m. The objective is a maximization.
class MilpInstance {
 public:
  MilpInstance(int horizon, int n_modules);

  int horizon() const noexcept { return horizon_; }
  int n_modules() const noexcept { return n_modules_; }
  int n_vars() const noexcept { return 5 * horizon_ * n_modules_ + horizon_; }

  int var_p_grid(int t) const noexcept { return t; }
  int var_h(int t, int m) const noexcept { return base_h_ + t * n_modules_ + m; }
  int var_p_e(int t, int m) const noexcept {
    return base_p_e_ + t * n_modules_ + m;
  }
  int var_p_su(int t, int m) const noexcept {
    return base_p_su_ + t * n_modules_ + m;
  }
  int var_z_on(int t, int m) const noexcept {
    return base_z_on_ + t * n_modules_ + m;
  }
  int var_z_su(int t, int m) const noexcept {
    return base_z_su_ + t * n_modules_ + m;
  }

  bool is_binary(int var) const noexcept { return var >= base_z_on_; }
  std::string var_name(int var) const;

  std::vector<double> objective;   // maximize objective . x
  std::vector<double> var_lower;
  std::vector<double> var_upper;   // +inf where only rows bound the variable
  std::vector<MilpRow> rows;

  std::map<RowFamily, int> row_counts() const;

 private:
  int horizon_;
  int n_modules_;
  int base_h_, base_p_e_, base_p_su_, base_z_on_, base_z_su_;
};

MilpInstance build_milp(const ScheduleProblem& problem);

// Plain-text dump of an instance (LP-format style) for cross-checks with
// external solvers.
void write_milp_text(const MilpInstance& instance, std::ostream& out);

// Plant decisions for the whole horizon. Per-module arrays are indexed
// t * M + m.
struct Schedule {
  int horizon = 0;
  int n_modules = 0;
  std::vector<double> p_grid_mw;
  std::vector<double> p_e_mw;
  std::vector<double> h_kg;
  std::vector<double> p_su_mwh;
  std::vector<std::uint8_t> z_on;
  std::vector<std::uint8_t> z_su;
  double objective_value_usd = 0.0;

  double total_p_e_mwh() const;
  double total_h_kg() const;
  double grid_revenue_usd(const MarketSeries& market) const;
};

// Maps a raw solver vector back to a Schedule. Binaries must sit within
// 1e-6 of {0, 1}; the objective recomputed from the rounded values must match
// `solver_objective` within 1e-6 relative.
Schedule extract_schedule(const ScheduleProblem& problem,
                          const std::vector<double>& solution,
                          double solver_objective);

// Independent feasibility audit: recomputes every constraint family from the
// problem data and reports the worst violation per family, the recomputed
// objective, and how tightly hydrogen tracks the PWL envelope at producing
// hours.
struct VerifyReport {
  std::map<RowFamily, double> max_violation;
  double objective_usd = 0.0;
  double hydrogen_tightness_gap_kg = 0.0;  // max |h - eval_pwl(p_e)|, p_e > 0
  double worst_violation() const;
  bool feasible(double tol = 1e-6) const { return worst_violation() <= tol; }
};

VerifyReport verify_schedule(const ScheduleProblem& problem,
                             const Schedule& schedule);

}  // namespace h2sched
