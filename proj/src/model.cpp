#include "h2sched/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace h2sched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBinaryTol = 1e-6;

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

void ElectrolyzerSpec::validate() const {
  if (!(c_max_mw > 0.0)) {
    throw ValidationError("module capacity c_max must be positive");
  }
  if (!(c_min_fraction > 0.0) || !(c_min_fraction < 1.0)) {
    throw ValidationError("c_min_fraction must lie in (0, 1)");
  }
  if (!(ramp_fraction > 0.0)) {
    throw ValidationError("ramp_fraction must be positive");
  }
  if (startup_energy_fraction < 0.0) {
    throw ValidationError("startup_energy_fraction must be >= 0");
  }
  if (hydrogen_price_usd_per_kg < 0.0) {
    throw ValidationError("hydrogen price must be >= 0");
  }
}

void FleetConfig::validate() const {
  if (n_modules < 1) {
    throw ValidationError("fleet needs at least one module");
  }
  spec.validate();
  if (!initial_on.empty() &&
      initial_on.size() != static_cast<std::size_t>(n_modules)) {
    throw ValidationError("initial_on must list one state per module");
  }
  if (!initial_power_mw.empty() &&
      initial_power_mw.size() != static_cast<std::size_t>(n_modules)) {
    throw ValidationError("initial_power must list one value per module");
  }
  for (double p : initial_power_mw) {
    if (p < 0.0 || p > spec.c_max_mw) {
      throw ValidationError("initial module power outside [0, c_max]");
    }
  }
}

ScheduleProblem build_problem(MarketSeries market, FleetConfig fleet,
                              PwlCurve pwl) {
  fleet.validate();
  if (market.horizon() == 0) {
    throw ValidationError("market series is empty");
  }
  if (pwl.n_segments() == 0) {
    throw ValidationError("PWL curve has no segments");
  }
  for (int t = 0; t < market.horizon(); ++t) {
    validate_record(market.records[t], t + 1);
  }
  if (fleet.initial_on.empty()) {
    fleet.initial_on.assign(fleet.n_modules, 0);
  }
  if (fleet.initial_power_mw.empty()) {
    fleet.initial_power_mw.assign(fleet.n_modules, 0.0);
  }
  ScheduleProblem problem{std::move(market), std::move(fleet), std::move(pwl),
                          {}, {}};
  problem.export_limit_mw.reserve(problem.horizon());
  problem.availability_mw.reserve(problem.horizon());
  for (const MarketRecord& r : problem.market.records) {
    problem.export_limit_mw.push_back(export_limit(r));
    problem.availability_mw.push_back(availability(r));
  }
  return problem;
}

const char* row_family_name(RowFamily family) {
  switch (family) {
    case RowFamily::kHydrogenCurve: return "hydrogen_curve";
    case RowFamily::kOperatingRange: return "operating_range";
    case RowFamily::kExportLimit: return "export_limit";
    case RowFamily::kRampUp: return "ramp_up";
    case RowFamily::kRampDown: return "ramp_down";
    case RowFamily::kStartupLogicA: return "startup_logic_a";
    case RowFamily::kStartupLogicB: return "startup_logic_b";
    case RowFamily::kStartupLogicC: return "startup_logic_c";
    case RowFamily::kStartupCost: return "startup_cost";
    case RowFamily::kPowerBalance: return "power_balance";
  }
  return "unknown";
}

MilpInstance::MilpInstance(int horizon, int n_modules)
    : horizon_(horizon), n_modules_(n_modules) {
  const int tm = horizon * n_modules;
  base_h_ = horizon;
  base_p_e_ = base_h_ + tm;
  base_p_su_ = base_p_e_ + tm;
  base_z_on_ = base_p_su_ + tm;
  base_z_su_ = base_z_on_ + tm;
  objective.assign(n_vars(), 0.0);
  var_lower.assign(n_vars(), 0.0);
  var_upper.assign(n_vars(), kInf);
}

std::string MilpInstance::var_name(int var) const {
  const int tm = horizon_ * n_modules_;
  auto tm_name = [&](const char* stem, int offset) {
    const int t = offset / n_modules_;
    const int m = offset % n_modules_;
    return std::string(stem) + "_t" + std::to_string(t) + "_m" +
           std::to_string(m);
  };
  if (var < base_h_) return "p_grid_t" + std::to_string(var);
  if (var < base_p_e_) return tm_name("h", var - base_h_);
  if (var < base_p_su_) return tm_name("p_e", var - base_p_e_);
  if (var < base_z_on_) return tm_name("p_su", var - base_p_su_);
  if (var < base_z_su_) return tm_name("z_on", var - base_z_on_);
  if (var < base_z_su_ + tm) return tm_name("z_su", var - base_z_su_);
  throw ValidationError("variable index out of range");
}

std::map<RowFamily, int> MilpInstance::row_counts() const {
  std::map<RowFamily, int> counts;
  for (const MilpRow& row : rows) ++counts[row.family];
  return counts;
}

MilpInstance build_milp(const ScheduleProblem& problem) {
  const int T = problem.horizon();
  const int M = problem.n_modules();
  const ElectrolyzerSpec& spec = problem.fleet.spec;
  const double c_max = spec.c_max_mw;
  const double c_min = spec.c_min_mw();
  const double ramp = spec.ramp_mw();
  const double c_su = spec.startup_energy_mwh();
  const auto& segments = problem.pwl.segments();

  MilpInstance inst(T, M);

  for (int t = 0; t < T; ++t) {
    inst.objective[inst.var_p_grid(t)] =
        problem.market.records[t].cleared_price;
    for (int m = 0; m < M; ++m) {
      inst.objective[inst.var_h(t, m)] = spec.hydrogen_price_usd_per_kg;
      inst.var_upper[inst.var_z_on(t, m)] = 1.0;
      inst.var_upper[inst.var_z_su(t, m)] = 1.0;
    }
  }

  auto add_row = [&](RowFamily family, int t, int m, int segment, double lower,
                     double upper,
                     std::vector<std::pair<std::int32_t, double>> coeffs) {
    inst.rows.push_back(
        MilpRow{family, t, m, segment, lower, upper, std::move(coeffs)});
  };

  // Hydrogen envelope, one row per segment. The intercept term is gated by
  // (z_on - z_su) so that modules which are off or in their startup hour are
  // held at h <= a_i * p_e (= 0 at p_e = 0) even when b_i < 0; for running
  // modules the gate is 1 and the row is the plain envelope line.
  for (int t = 0; t < T; ++t) {
    for (int m = 0; m < M; ++m) {
      for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
        const double a = segments[i].slope;
        const double bc = segments[i].intercept_norm * c_max;
        std::vector<std::pair<std::int32_t, double>> coeffs{
            {inst.var_h(t, m), 1.0}, {inst.var_p_e(t, m), -a}};
        if (bc != 0.0) {
          coeffs.emplace_back(inst.var_z_on(t, m), -bc);
          coeffs.emplace_back(inst.var_z_su(t, m), bc);
        }
        add_row(RowFamily::kHydrogenCurve, t, m, i, -kInf, 0.0,
                std::move(coeffs));
      }
    }
  }

  // Operating range, gated by (z_on - z_su): a module consumes within
  // [C_min, C_max] while running, and exactly zero while off or starting up.
  for (int t = 0; t < T; ++t) {
    for (int m = 0; m < M; ++m) {
      add_row(RowFamily::kOperatingRange, t, m, 0, -kInf, 0.0,
              {{inst.var_p_e(t, m), -1.0},
               {inst.var_z_on(t, m), c_min},
               {inst.var_z_su(t, m), -c_min}});
      add_row(RowFamily::kOperatingRange, t, m, 1, -kInf, 0.0,
              {{inst.var_p_e(t, m), 1.0},
               {inst.var_z_on(t, m), -c_max},
               {inst.var_z_su(t, m), c_max}});
    }
  }

  for (int t = 0; t < T; ++t) {
    add_row(RowFamily::kExportLimit, t, -1, -1, -kInf,
            problem.export_limit_mw[t], {{inst.var_p_grid(t), 1.0}});
  }

  // Ramp limits; hour 0 ramps against the configured initial power.
  for (int t = 0; t < T; ++t) {
    for (int m = 0; m < M; ++m) {
      const double p0 = problem.fleet.initial_power_mw[m];
      if (t == 0) {
        add_row(RowFamily::kRampUp, t, m, -1, -kInf, ramp + p0,
                {{inst.var_p_e(0, m), 1.0}});
        add_row(RowFamily::kRampDown, t, m, -1, -kInf, ramp - p0,
                {{inst.var_p_e(0, m), -1.0}});
      } else {
        add_row(RowFamily::kRampUp, t, m, -1, -kInf, ramp,
                {{inst.var_p_e(t, m), 1.0}, {inst.var_p_e(t - 1, m), -1.0}});
        add_row(RowFamily::kRampDown, t, m, -1, -kInf, ramp,
                {{inst.var_p_e(t - 1, m), 1.0}, {inst.var_p_e(t, m), -1.0}});
      }
    }
  }

  // Startup detection: z_su = 1 exactly on off->on transitions.
  for (int t = 0; t < T; ++t) {
    for (int m = 0; m < M; ++m) {
      const double on0 = problem.fleet.initial_on[m] ? 1.0 : 0.0;
      if (t == 0) {
        add_row(RowFamily::kStartupLogicA, t, m, -1, -kInf, 1.0 - on0,
                {{inst.var_z_su(0, m), 1.0}});
        add_row(RowFamily::kStartupLogicB, t, m, -1, -kInf, 0.0,
                {{inst.var_z_su(0, m), 1.0}, {inst.var_z_on(0, m), -1.0}});
        add_row(RowFamily::kStartupLogicC, t, m, -1, -kInf, on0,
                {{inst.var_z_on(0, m), 1.0}, {inst.var_z_su(0, m), -1.0}});
      } else {
        add_row(RowFamily::kStartupLogicA, t, m, -1, -kInf, 1.0,
                {{inst.var_z_su(t, m), 1.0}, {inst.var_z_on(t - 1, m), 1.0}});
        add_row(RowFamily::kStartupLogicB, t, m, -1, -kInf, 0.0,
                {{inst.var_z_su(t, m), 1.0}, {inst.var_z_on(t, m), -1.0}});
        add_row(RowFamily::kStartupLogicC, t, m, -1, -kInf, 0.0,
                {{inst.var_z_on(t, m), 1.0},
                 {inst.var_z_on(t - 1, m), -1.0},
                 {inst.var_z_su(t, m), -1.0}});
      }
    }
  }

  for (int t = 0; t < T; ++t) {
    for (int m = 0; m < M; ++m) {
      add_row(RowFamily::kStartupCost, t, m, -1, 0.0, 0.0,
              {{inst.var_p_su(t, m), 1.0}, {inst.var_z_su(t, m), -c_su}});
    }
  }

  // Plant-wide balance: grid sales plus all electrolyzer and startup power
  // may not exceed the wind availability; the slack is curtailment.
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<std::int32_t, double>> coeffs;
    coeffs.reserve(1 + 2 * M);
    coeffs.emplace_back(inst.var_p_grid(t), 1.0);
    for (int m = 0; m < M; ++m) {
      coeffs.emplace_back(inst.var_p_e(t, m), 1.0);
      coeffs.emplace_back(inst.var_p_su(t, m), 1.0);
    }
    add_row(RowFamily::kPowerBalance, t, -1, -1, -kInf,
            problem.availability_mw[t], std::move(coeffs));
  }

  return inst;
}

void write_milp_text(const MilpInstance& instance, std::ostream& out) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  out << "\\ scheduling MILP, " << instance.horizon() << " hours x "
      << instance.n_modules() << " modules\n";
  out << "Maximize\n obj:";
  bool first = true;
  for (int j = 0; j < instance.n_vars(); ++j) {
    const double c = instance.objective[j];
    if (c == 0.0) continue;
    out << (first ? " " : (c >= 0.0 ? " + " : " - "));
    if (!first && c < 0.0) {
      out << num(-c);
    } else {
      out << num(c);
    }
    out << ' ' << instance.var_name(j);
    first = false;
  }
  out << "\nSubject To\n";
  std::map<RowFamily, int> seen;
  for (const MilpRow& row : instance.rows) {
    std::string name = row_family_name(row.family);
    if (row.t >= 0) name += "_t" + std::to_string(row.t);
    if (row.m >= 0) name += "_m" + std::to_string(row.m);
    if (row.family == RowFamily::kHydrogenCurve) {
      name += "_s" + std::to_string(row.segment);
    } else if (row.family == RowFamily::kOperatingRange) {
      name += row.segment == 0 ? "_lo" : "_hi";
    }
    out << ' ' << name << ':';
    for (const auto& [var, coeff] : row.coeffs) {
      out << (coeff >= 0.0 ? " + " : " - ") << num(std::abs(coeff)) << ' '
          << instance.var_name(var);
    }
    if (row.lower == row.upper) {
      out << " = " << num(row.upper);
    } else {
      out << " <= " << num(row.upper);
    }
    out << '\n';
    (void)seen;
  }
  out << "Bounds\n";
  for (int j = 0; j < instance.n_vars(); ++j) {
    if (instance.is_binary(j)) continue;
    if (std::isfinite(instance.var_upper[j])) {
      out << ' ' << num(instance.var_lower[j]) << " <= "
          << instance.var_name(j) << " <= " << num(instance.var_upper[j])
          << '\n';
    }
  }
  out << "Binaries\n";
  for (int j = 0; j < instance.n_vars(); ++j) {
    if (instance.is_binary(j)) out << ' ' << instance.var_name(j) << '\n';
  }
  out << "End\n";
}

double Schedule::total_p_e_mwh() const {
  double sum = 0.0;
  for (double v : p_e_mw) sum += v;
  return sum;
}

double Schedule::total_h_kg() const {
  double sum = 0.0;
  for (double v : h_kg) sum += v;
  return sum;
}

double Schedule::grid_revenue_usd(const MarketSeries& market) const {
  double sum = 0.0;
  for (int t = 0; t < horizon; ++t) {
    sum += market.records[t].cleared_price * p_grid_mw[t];
  }
  return sum;
}

Schedule extract_schedule(const ScheduleProblem& problem,
                          const std::vector<double>& solution,
                          double solver_objective) {
  const int T = problem.horizon();
  const int M = problem.n_modules();
  MilpInstance shape(T, M);
  if (solution.size() != static_cast<std::size_t>(shape.n_vars())) {
    throw ValidationError("solution vector length " +
                          std::to_string(solution.size()) +
                          " does not match the variable map (" +
                          std::to_string(shape.n_vars()) + ")");
  }

  Schedule s;
  s.horizon = T;
  s.n_modules = M;
  s.p_grid_mw.resize(T);
  s.p_e_mw.resize(T * M);
  s.h_kg.resize(T * M);
  s.p_su_mwh.resize(T * M);
  s.z_on.resize(T * M);
  s.z_su.resize(T * M);

  auto round_binary = [&](int var) -> std::uint8_t {
    const double v = solution[var];
    if (std::abs(v) <= kBinaryTol) return 0;
    if (std::abs(v - 1.0) <= kBinaryTol) return 1;
    throw ValidationError("fractional binary " + shape.var_name(var) + " = " +
                          std::to_string(v));
  };

  for (int t = 0; t < T; ++t) {
    s.p_grid_mw[t] = positive_part(solution[shape.var_p_grid(t)]);
    for (int m = 0; m < M; ++m) {
      const int k = t * M + m;
      s.p_e_mw[k] = positive_part(solution[shape.var_p_e(t, m)]);
      s.h_kg[k] = positive_part(solution[shape.var_h(t, m)]);
      s.p_su_mwh[k] = positive_part(solution[shape.var_p_su(t, m)]);
      s.z_on[k] = round_binary(shape.var_z_on(t, m));
      s.z_su[k] = round_binary(shape.var_z_su(t, m));
    }
  }

  double objective = 0.0;
  for (int t = 0; t < T; ++t) {
    objective += problem.market.records[t].cleared_price * s.p_grid_mw[t];
    for (int m = 0; m < M; ++m) {
      objective += problem.fleet.spec.hydrogen_price_usd_per_kg *
                   s.h_kg[t * M + m];
    }
  }
  const double scale = std::max(1.0, std::abs(solver_objective));
  if (std::abs(objective - solver_objective) > 1e-6 * scale) {
    throw ValidationError(
        "objective recomputed from the rounded schedule (" +
        std::to_string(objective) + ") disagrees with the solver value (" +
        std::to_string(solver_objective) + ")");
  }
  s.objective_value_usd = objective;
  return s;
}

VerifyReport verify_schedule(const ScheduleProblem& problem,
                             const Schedule& schedule) {
  const int T = problem.horizon();
  const int M = problem.n_modules();
  if (schedule.horizon != T || schedule.n_modules != M) {
    throw ValidationError("schedule shape does not match the problem");
  }
  const ElectrolyzerSpec& spec = problem.fleet.spec;
  const double c_max = spec.c_max_mw;
  const double c_min = spec.c_min_mw();
  const double ramp = spec.ramp_mw();
  const double c_su = spec.startup_energy_mwh();

  VerifyReport report;
  auto& viol = report.max_violation;
  for (RowFamily f :
       {RowFamily::kHydrogenCurve, RowFamily::kOperatingRange,
        RowFamily::kExportLimit, RowFamily::kRampUp, RowFamily::kRampDown,
        RowFamily::kStartupLogicA, RowFamily::kStartupLogicB,
        RowFamily::kStartupLogicC, RowFamily::kStartupCost,
        RowFamily::kPowerBalance}) {
    viol[f] = 0.0;
  }
  auto raise = [&](RowFamily f, double v) {
    if (v > viol[f]) viol[f] = v;
  };

  for (int t = 0; t < T; ++t) {
    double used = schedule.p_grid_mw[t];
    raise(RowFamily::kExportLimit,
          schedule.p_grid_mw[t] - problem.export_limit_mw[t]);
    raise(RowFamily::kExportLimit, -schedule.p_grid_mw[t]);
    for (int m = 0; m < M; ++m) {
      const int k = t * M + m;
      const double p = schedule.p_e_mw[k];
      const double h = schedule.h_kg[k];
      const double psu = schedule.p_su_mwh[k];
      const double on = schedule.z_on[k] ? 1.0 : 0.0;
      const double su = schedule.z_su[k] ? 1.0 : 0.0;
      const double prev_on =
          t > 0 ? (schedule.z_on[k - M] ? 1.0 : 0.0)
                : (problem.fleet.initial_on[m] ? 1.0 : 0.0);
      const double prev_p =
          t > 0 ? schedule.p_e_mw[k - M] : problem.fleet.initial_power_mw[m];
      const double gate = on - su;

      double envelope = std::numeric_limits<double>::infinity();
      for (const PwlSegment& seg : problem.pwl.segments()) {
        envelope = std::min(envelope,
                            seg.slope * p + seg.intercept_norm * c_max * gate);
      }
      raise(RowFamily::kHydrogenCurve, h - envelope);
      raise(RowFamily::kHydrogenCurve, -h);

      raise(RowFamily::kOperatingRange, c_min * gate - p);
      raise(RowFamily::kOperatingRange, p - c_max * gate);

      raise(RowFamily::kRampUp, p - prev_p - ramp);
      raise(RowFamily::kRampDown, prev_p - p - ramp);

      raise(RowFamily::kStartupLogicA, su + prev_on - 1.0);
      raise(RowFamily::kStartupLogicB, su - on);
      raise(RowFamily::kStartupLogicC, on - prev_on - su);

      raise(RowFamily::kStartupCost, std::abs(psu - c_su * su));

      used += p + psu;

      if (p > 1e-6) {
        const double gap = std::abs(h - eval_pwl(problem.pwl, p, c_max));
        report.hydrogen_tightness_gap_kg =
            std::max(report.hydrogen_tightness_gap_kg, gap);
      }
    }
    raise(RowFamily::kPowerBalance, used - problem.availability_mw[t]);
  }

  double objective = 0.0;
  for (int t = 0; t < T; ++t) {
    objective += problem.market.records[t].cleared_price *
                 schedule.p_grid_mw[t];
    for (int m = 0; m < M; ++m) {
      objective += spec.hydrogen_price_usd_per_kg * schedule.h_kg[t * M + m];
    }
  }
  report.objective_usd = objective;
  return report;
}

double VerifyReport::worst_violation() const {
  double worst = 0.0;
  for (const auto& [family, value] : max_violation) {
    worst = std::max(worst, value);
  }
  return worst;
}

}  // namespace h2sched
