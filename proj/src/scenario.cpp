#include "h2sched/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "h2sched/csv.hpp"
#include "h2sched/curve.hpp"

namespace h2sched {

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& s) {
  return split_csv_line(s);
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out.good()) throw ValidationError("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

MarketSeries slice_market(const MarketSeries& market, int begin, int length) {
  MarketSeries out;
  out.records.reserve(length);
  for (int t = 0; t < length; ++t) {
    MarketRecord r = market.records[begin + t];
    r.hour = t;
    out.records.push_back(r);
  }
  return out;
}

}  // namespace

std::string ScenarioConfig::effective_label() const {
  if (!label.empty()) return label;
  std::ostringstream os;
  os << "m" << n_modules << "x" << module_capacity_mw << "mw_s" << n_segments;
  return os.str();
}

ScenarioConfig parse_scenario_config(std::istream& in) {
  ScenarioConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string trimmed;
    {
      std::size_t b = line.find_first_not_of(" \t\r");
      std::size_t e = line.find_last_not_of(" \t\r");
      if (b != std::string::npos) trimmed = line.substr(b, e - b + 1);
    }
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                                ": expected key = value",
                            line_no);
    }
    auto strip = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t");
      const std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = strip(trimmed.substr(0, eq));
    const std::string value = strip(trimmed.substr(eq + 1));
    auto as_double = [&](const std::string& v) {
      try {
        std::size_t used = 0;
        const double parsed = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return parsed;
      } catch (const std::exception&) {
        throw ValidationError("config line " + std::to_string(line_no) +
                                  ": cannot parse number '" + v + "'",
                              line_no);
      }
    };
    auto as_bool = [&](const std::string& v) {
      if (v == "1" || v == "true" || v == "yes") return true;
      if (v == "0" || v == "false" || v == "no") return false;
      throw ValidationError("config line " + std::to_string(line_no) +
                                ": cannot parse boolean '" + v + "'",
                            line_no);
    };

    if (key == "market_file") {
      config.market_file = value;
    } else if (key == "curve_file") {
      config.curve_file = value;
    } else if (key == "alpha") {
      config.alpha = as_double(value);
    } else if (key == "beta") {
      config.beta = as_double(value);
    } else if (key == "gamma") {
      config.gamma = as_double(value);
    } else if (key == "x_min") {
      config.x_min = as_double(value);
    } else if (key == "segments") {
      config.n_segments = static_cast<int>(as_double(value));
    } else if (key == "modules") {
      config.n_modules = static_cast<int>(as_double(value));
    } else if (key == "module_capacity_mw") {
      config.module_capacity_mw = as_double(value);
    } else if (key == "c_min_fraction") {
      config.c_min_fraction = as_double(value);
    } else if (key == "ramp_fraction") {
      config.ramp_fraction = as_double(value);
    } else if (key == "startup_energy_fraction") {
      config.startup_energy_fraction = as_double(value);
    } else if (key == "hydrogen_price_usd_per_kg") {
      config.hydrogen_price_usd_per_kg = as_double(value);
    } else if (key == "day_split") {
      config.day_split = as_bool(value);
    } else if (key == "rel_gap") {
      config.solver.rel_gap = as_double(value);
    } else if (key == "node_limit") {
      config.solver.node_limit = static_cast<long>(as_double(value));
    } else if (key == "time_limit_s") {
      config.solver.time_limit_s = as_double(value);
    } else if (key == "label") {
      config.label = value;
    } else if (key == "initial_on") {
      config.initial_on.clear();
      for (const std::string& item : split_list(value)) {
        config.initial_on.push_back(as_bool(item) ? 1 : 0);
      }
    } else if (key == "initial_power_mw") {
      config.initial_power_mw.clear();
      for (const std::string& item : split_list(value)) {
        config.initial_power_mw.push_back(as_double(item));
      }
    } else {
      throw ValidationError("config line " + std::to_string(line_no) +
                                ": unknown key '" + key + "'",
                            line_no);
    }
  }
  return config;
}

namespace {

ProductionCurve make_curve(const ScenarioConfig& config) {
  if (!config.curve_file.empty()) {
    std::ifstream in(config.curve_file);
    if (!in) {
      throw ValidationError("cannot open curve file '" + config.curve_file +
                            "'");
    }
    return load_curve_points(in);
  }
  return reference_curve(config.alpha, config.beta, config.gamma,
                         config.x_min);
}

FleetConfig make_fleet(const ScenarioConfig& config) {
  FleetConfig fleet;
  fleet.n_modules = config.n_modules;
  fleet.spec.c_max_mw = config.module_capacity_mw;
  fleet.spec.c_min_fraction = config.c_min_fraction;
  fleet.spec.ramp_fraction = config.ramp_fraction;
  fleet.spec.startup_energy_fraction = config.startup_energy_fraction;
  fleet.spec.hydrogen_price_usd_per_kg = config.hydrogen_price_usd_per_kg;
  fleet.initial_on = config.initial_on;
  fleet.initial_power_mw = config.initial_power_mw;
  return fleet;
}

struct SolveOutcome {
  Schedule schedule;
  MipStatus status;
  double gap = 0.0;
  double best_bound = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  double wall_seconds = 0.0;
};

SolveOutcome solve_whole(const ScheduleProblem& problem,
                         const MipOptions& options) {
  const MipResult result = solve_milp(problem, options);
  if (!result.incumbent) {
    throw ValidationError(std::string("no feasible schedule found (") +
                          mip_status_name(result.status) + ")");
  }
  SolveOutcome out;
  out.schedule = *result.incumbent;
  out.status = result.status;
  out.gap = result.gap;
  out.best_bound = result.best_bound;
  out.nodes = result.nodes;
  out.lp_iterations = result.lp_iterations;
  out.wall_seconds = result.wall_seconds;
  return out;
}

SolveOutcome solve_day_split(const MarketSeries& market,
                             const FleetConfig& fleet, const PwlCurve& pwl,
                             const MipOptions& options) {
  const int T = market.horizon();
  const int M = fleet.n_modules;
  SolveOutcome out;
  out.schedule.horizon = T;
  out.schedule.n_modules = M;
  out.schedule.p_grid_mw.assign(T, 0.0);
  out.schedule.p_e_mw.assign(T * M, 0.0);
  out.schedule.h_kg.assign(T * M, 0.0);
  out.schedule.p_su_mwh.assign(T * M, 0.0);
  out.schedule.z_on.assign(T * M, 0);
  out.schedule.z_su.assign(T * M, 0);
  out.status = MipStatus::kOptimal;

  FleetConfig chunk_fleet = fleet;
  double objective = 0.0;
  for (int begin = 0; begin < T; begin += 24) {
    const int len = std::min(24, T - begin);
    ScheduleProblem chunk = build_problem(slice_market(market, begin, len),
                                          chunk_fleet, pwl);
    const MipResult result = solve_milp(chunk, options);
    if (!result.incumbent) {
      throw ValidationError("day-split chunk starting at hour " +
                            std::to_string(begin) + " has no feasible " +
                            "schedule (" + mip_status_name(result.status) +
                            ")");
    }
    const Schedule& s = *result.incumbent;
    for (int t = 0; t < len; ++t) {
      out.schedule.p_grid_mw[begin + t] = s.p_grid_mw[t];
      for (int m = 0; m < M; ++m) {
        const int src = t * M + m;
        const int dst = (begin + t) * M + m;
        out.schedule.p_e_mw[dst] = s.p_e_mw[src];
        out.schedule.h_kg[dst] = s.h_kg[src];
        out.schedule.p_su_mwh[dst] = s.p_su_mwh[src];
        out.schedule.z_on[dst] = s.z_on[src];
        out.schedule.z_su[dst] = s.z_su[src];
      }
    }
    objective += s.objective_value_usd;
    out.gap = std::max(out.gap, result.gap);
    out.best_bound += result.best_bound;
    out.nodes += result.nodes;
    out.lp_iterations += result.lp_iterations;
    out.wall_seconds += result.wall_seconds;
    if (result.status != MipStatus::kOptimal &&
        out.status == MipStatus::kOptimal) {
      out.status = result.status;
    }
    // carry the plant state into the next day
    chunk_fleet.initial_on.assign(M, 0);
    chunk_fleet.initial_power_mw.assign(M, 0.0);
    for (int m = 0; m < M; ++m) {
      chunk_fleet.initial_on[m] = s.z_on[(len - 1) * M + m];
      chunk_fleet.initial_power_mw[m] = s.p_e_mw[(len - 1) * M + m];
    }
  }
  out.schedule.objective_value_usd = objective;
  return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config,
                            const MarketSeries& market) {
  const ProductionCurve curve = make_curve(config);
  const PwlCurve pwl =
      fit_concave_pwl(curve, config.n_segments, config.module_capacity_mw);
  const FleetConfig fleet = make_fleet(config);
  ScheduleProblem problem = build_problem(market, fleet, pwl);

  const SolveOutcome outcome =
      config.day_split ? solve_day_split(market, fleet, pwl, config.solver)
                       : solve_whole(problem, config.solver);

  const VerifyReport report = verify_schedule(problem, outcome.schedule);
  if (!report.feasible(1e-6)) {
    throw ValidationError(
        "solver result failed the feasibility audit (worst violation " +
        std::to_string(report.worst_violation()) + ")");
  }

  ScenarioResult result;
  result.label = config.effective_label();
  result.market_file = config.market_file;
  result.n_modules = config.n_modules;
  result.module_capacity_mw = config.module_capacity_mw;
  result.n_segments = config.n_segments;
  result.horizon = market.horizon();
  result.schedule = outcome.schedule;
  result.status = outcome.status;
  result.gap = outcome.gap;
  result.best_bound_usd = outcome.best_bound;
  result.nodes = outcome.nodes;
  result.lp_iterations = outcome.lp_iterations;
  result.wall_seconds = outcome.wall_seconds;

  const int T = market.horizon();
  const int M = config.n_modules;
  result.hydrogen_price_usd_per_kg = config.hydrogen_price_usd_per_kg;
  result.p_grid_mw = outcome.schedule.p_grid_mw;
  result.p_e_total_mw.assign(T, 0.0);
  result.h_total_kg.assign(T, 0.0);
  result.price_usd_mwh.resize(T);
  for (int t = 0; t < T; ++t) {
    result.price_usd_mwh[t] = market.records[t].cleared_price;
    for (int m = 0; m < M; ++m) {
      result.p_e_total_mw[t] += outcome.schedule.p_e_mw[t * M + m];
      result.h_total_kg[t] += outcome.schedule.h_kg[t * M + m];
    }
  }
  result.total_power_mwh = outcome.schedule.total_p_e_mwh();
  result.total_hydrogen_kg = outcome.schedule.total_h_kg();
  result.grid_revenue_usd = outcome.schedule.grid_revenue_usd(market);
  result.hydrogen_revenue_usd =
      config.hydrogen_price_usd_per_kg * result.total_hydrogen_kg;
  result.total_revenue_usd = outcome.schedule.objective_value_usd;
  return result;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  if (config.market_file.empty()) {
    throw ValidationError("scenario needs a market file");
  }
  std::ifstream in(config.market_file);
  if (!in) {
    throw ValidationError("cannot open market file '" + config.market_file +
                          "'");
  }
  const MarketSeries market = parse_market_csv(in);
  return run_scenario(config, market);
}

ComparisonTable compare_configurations(
    const std::vector<ScenarioResult>& results) {
  if (results.size() < 2) {
    throw ValidationError("comparison needs at least two results");
  }
  const double total_capacity =
      results[0].n_modules * results[0].module_capacity_mw;
  for (const ScenarioResult& r : results) {
    if (r.horizon != results[0].horizon ||
        r.n_segments != results[0].n_segments ||
        r.market_file != results[0].market_file) {
      throw ValidationError(
          "comparison requires identical market data, horizon, and segment "
          "count");
    }
    const double cap = r.n_modules * r.module_capacity_mw;
    if (std::abs(cap - total_capacity) > 1e-9 * std::max(1.0, total_capacity)) {
      throw ValidationError("comparison requires identical total capacity");
    }
  }
  std::vector<const ScenarioResult*> sorted;
  for (const ScenarioResult& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const ScenarioResult* a, const ScenarioResult* b) {
              return a->n_modules < b->n_modules;
            });
  const ScenarioResult& base = *sorted.front();
  auto pct = [](double value, double baseline) {
    if (baseline == 0.0) return value == 0.0 ? 0.0 : std::nan("");
    return 100.0 * (value - baseline) / baseline;
  };
  ComparisonTable table;
  for (const ScenarioResult* r : sorted) {
    ComparisonRow row;
    row.n_modules = r->n_modules;
    row.module_capacity_mw = r->module_capacity_mw;
    row.total_power_mwh = r->total_power_mwh;
    row.pct_power = pct(r->total_power_mwh, base.total_power_mwh);
    row.total_hydrogen_kg = r->total_hydrogen_kg;
    row.pct_hydrogen = pct(r->total_hydrogen_kg, base.total_hydrogen_kg);
    row.total_revenue_usd = r->total_revenue_usd;
    row.pct_revenue = pct(r->total_revenue_usd, base.total_revenue_usd);
    table.rows.push_back(row);
  }
  return table;
}

std::vector<HourDetailRow> hour_detail(
    const std::vector<ScenarioResult>& results, int hour) {
  if (results.empty()) {
    throw ValidationError("hour detail needs at least one result");
  }
  std::vector<HourDetailRow> rows;
  for (const ScenarioResult& r : results) {
    if (hour < 0 || hour >= r.horizon) {
      throw ValidationError("hour " + std::to_string(hour) +
                            " outside the horizon of '" + r.label + "'");
    }
    HourDetailRow row;
    row.n_segments = r.n_segments;
    row.n_modules = r.n_modules;
    row.module_capacity_mw = r.module_capacity_mw;
    row.power_mw = r.p_e_total_mw[hour];
    row.hydrogen_kg = r.h_total_kg[hour];
    row.hydrogen_profit_usd = r.hydrogen_price_usd_per_kg * row.hydrogen_kg;
    row.total_profit_usd =
        row.hydrogen_profit_usd + r.price_usd_mwh[hour] * r.p_grid_mw[hour];
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const HourDetailRow& a, const HourDetailRow& b) {
              if (a.n_segments != b.n_segments)
                return a.n_segments < b.n_segments;
              return a.n_modules < b.n_modules;
            });
  return rows;
}

std::vector<std::string> emit_outputs(const ScenarioResult& result,
                                      const std::string& out_dir, bool csv,
                                      bool json_out) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  const int T = result.horizon;
  const int M = result.n_modules;
  if (csv) {
    std::ostringstream os;
    os.precision(10);
    os << "hour,p_grid_mw,p_e_total_mw";
    for (int m = 0; m < M; ++m) os << ",p_e_m" << m << "_mw";
    for (int m = 0; m < M; ++m) os << ",h_m" << m << "_kg";
    os << '\n';
    for (int t = 0; t < T; ++t) {
      os << t << ',' << result.p_grid_mw[t] << ',' << result.p_e_total_mw[t];
      for (int m = 0; m < M; ++m) os << ',' << result.schedule.p_e_mw[t * M + m];
      for (int m = 0; m < M; ++m) os << ',' << result.schedule.h_kg[t * M + m];
      os << '\n';
    }
    const std::string path = out_dir + "/" + result.label + "_schedule.csv";
    write_atomic(path, os.str());
    written.push_back(path);
  }
  if (json_out) {
    const std::string path = out_dir + "/" + result.label + "_metrics.json";
    write_atomic(path, scenario_metrics_json(result));
    written.push_back(path);
  }
  return written;
}

std::string emit_comparison_csv(const ComparisonTable& table,
                                const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ostringstream os;
  os.precision(10);
  os << "n_modules,module_capacity_mw,total_power_mwh,pct_power,"
        "total_hydrogen_kg,pct_hydrogen,total_revenue_usd,pct_revenue\n";
  for (const ComparisonRow& row : table.rows) {
    os << row.n_modules << ',' << row.module_capacity_mw << ','
       << row.total_power_mwh << ',' << row.pct_power << ','
       << row.total_hydrogen_kg << ',' << row.pct_hydrogen << ','
       << row.total_revenue_usd << ',' << row.pct_revenue << '\n';
  }
  const std::string path = out_dir + "/comparison.csv";
  write_atomic(path, os.str());
  return path;
}

std::string scenario_metrics_json(const ScenarioResult& result) {
  json j;
  j["config"] = {{"label", result.label},
                 {"market_file", result.market_file},
                 {"n_modules", result.n_modules},
                 {"module_capacity_mw", result.module_capacity_mw},
                 {"n_segments", result.n_segments},
                 {"horizon", result.horizon},
                 {"hydrogen_price_usd_per_kg",
                  result.hydrogen_price_usd_per_kg}};
  j["totals"] = {{"power_mwh", result.total_power_mwh},
                 {"hydrogen_kg", result.total_hydrogen_kg},
                 {"revenue_usd", result.total_revenue_usd},
                 {"grid_revenue_usd", result.grid_revenue_usd},
                 {"hydrogen_revenue_usd", result.hydrogen_revenue_usd}};
  j["solve"] = {{"status", mip_status_name(result.status)},
                {"gap", result.gap},
                {"best_bound_usd", result.best_bound_usd},
                {"nodes", result.nodes},
                {"lp_iterations", result.lp_iterations},
                {"wall_seconds", result.wall_seconds}};
  j["series"] = {{"p_grid_mw", result.p_grid_mw},
                 {"p_e_total_mw", result.p_e_total_mw},
                 {"h_total_kg", result.h_total_kg},
                 {"price_usd_mwh", result.price_usd_mwh}};
  json per_module_p(json::array());
  json per_module_h(json::array());
  for (int m = 0; m < result.n_modules; ++m) {
    json p(json::array());
    json h(json::array());
    for (int t = 0; t < result.horizon; ++t) {
      p.push_back(result.schedule.p_e_mw[t * result.n_modules + m]);
      h.push_back(result.schedule.h_kg[t * result.n_modules + m]);
    }
    per_module_p.push_back(std::move(p));
    per_module_h.push_back(std::move(h));
  }
  j["series"]["per_module_p_e_mw"] = std::move(per_module_p);
  j["series"]["per_module_h_kg"] = std::move(per_module_h);
  return j.dump(2) + "\n";
}

ScenarioResult scenario_metrics_from_json(const std::string& text) {
  const json j = json::parse(text);
  ScenarioResult r;
  r.label = j.at("config").at("label").get<std::string>();
  r.market_file = j.at("config").at("market_file").get<std::string>();
  r.n_modules = j.at("config").at("n_modules").get<int>();
  r.module_capacity_mw = j.at("config").at("module_capacity_mw").get<double>();
  r.n_segments = j.at("config").at("n_segments").get<int>();
  r.horizon = j.at("config").at("horizon").get<int>();
  r.hydrogen_price_usd_per_kg =
      j.at("config").at("hydrogen_price_usd_per_kg").get<double>();
  r.total_power_mwh = j.at("totals").at("power_mwh").get<double>();
  r.total_hydrogen_kg = j.at("totals").at("hydrogen_kg").get<double>();
  r.total_revenue_usd = j.at("totals").at("revenue_usd").get<double>();
  r.grid_revenue_usd = j.at("totals").at("grid_revenue_usd").get<double>();
  r.hydrogen_revenue_usd =
      j.at("totals").at("hydrogen_revenue_usd").get<double>();
  r.gap = j.at("solve").at("gap").get<double>();
  r.best_bound_usd = j.at("solve").at("best_bound_usd").get<double>();
  r.nodes = j.at("solve").at("nodes").get<long>();
  r.lp_iterations = j.at("solve").at("lp_iterations").get<long>();
  r.wall_seconds = j.at("solve").at("wall_seconds").get<double>();
  const std::string status = j.at("solve").at("status").get<std::string>();
  if (status == "optimal") r.status = MipStatus::kOptimal;
  else if (status == "gap_reached") r.status = MipStatus::kGapReached;
  else if (status == "limit_hit") r.status = MipStatus::kLimitHit;
  else r.status = MipStatus::kInfeasible;
  r.p_grid_mw = j.at("series").at("p_grid_mw").get<std::vector<double>>();
  r.p_e_total_mw =
      j.at("series").at("p_e_total_mw").get<std::vector<double>>();
  r.h_total_kg = j.at("series").at("h_total_kg").get<std::vector<double>>();
  r.price_usd_mwh =
      j.at("series").at("price_usd_mwh").get<std::vector<double>>();
  return r;
}

void print_comparison(const ComparisonTable& table, std::ostream& out) {
  out << "modules  cap[MW]  power[MWh]  +%      hydrogen[kg]  +%      "
         "revenue[USD]  +%\n";
  for (const ComparisonRow& row : table.rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%7d  %7.6g  %10.2f  %-6.2f  %12.2f  %-6.2f  %12.2f  %-6.2f",
                  row.n_modules, row.module_capacity_mw, row.total_power_mwh,
                  row.pct_power, row.total_hydrogen_kg, row.pct_hydrogen,
                  row.total_revenue_usd, row.pct_revenue);
    out << buf << '\n';
  }
}

void print_hour_detail(const std::vector<HourDetailRow>& rows,
                       std::ostream& out) {
  out << "segments  modules  cap[MW]  power[MW]  hydrogen[kg]  "
         "h2-profit[USD]  profit[USD]\n";
  for (const HourDetailRow& row : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%8d  %7d  %7.6g  %9.3f  %12.3f  %14.2f  %11.2f",
                  row.n_segments, row.n_modules, row.module_capacity_mw,
                  row.power_mw, row.hydrogen_kg, row.hydrogen_profit_usd,
                  row.total_profit_usd);
    out << buf << '\n';
  }
}

}  // namespace h2sched
