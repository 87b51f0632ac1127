#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "h2sched/csv.hpp"
#include "h2sched/curve.hpp"
#include "h2sched/lp.hpp"
#include "h2sched/scenario.hpp"

namespace {

using namespace h2sched;

struct CurveOptions {
  std::string curve_file;
  double alpha = 22.0;
  double beta = 6.0;
  double gamma = 0.54;
  double x_min = 0.10;
};

void add_curve_options(CLI::App* cmd, CurveOptions* opts) {
  cmd->add_option("--curve-file", opts->curve_file,
                  "CSV curve file (default: parametric reference curve)");
  cmd->add_option("--alpha", opts->alpha, "reference curve linear term");
  cmd->add_option("--beta", opts->beta, "reference curve quadratic term");
  cmd->add_option("--gamma", opts->gamma, "reference curve offset term");
  cmd->add_option("--x-min", opts->x_min, "minimum operating fraction");
}

ProductionCurve load_curve(const CurveOptions& opts) {
  if (!opts.curve_file.empty()) {
    std::ifstream in(opts.curve_file);
    if (!in) {
      throw ValidationError("cannot open curve file '" + opts.curve_file +
                            "'");
    }
    return load_curve_points(in);
  }
  return reference_curve(opts.alpha, opts.beta, opts.gamma, opts.x_min);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& item : split_csv_line(text)) {
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw ValidationError("empty list '" + text + "'");
  return out;
}

// Scenario flags shared by schedule/compare/hour-detail. Values given on the
// command line override the scenario config file.
struct ScenarioFlags {
  std::string config_file;
  ScenarioConfig flags;  // receives the parsed option values
  CurveOptions curve;
  CLI::App* cmd = nullptr;

  void add_to(CLI::App* app) {
    cmd = app;
    app->add_option("--config", config_file,
                    "scenario config file (key = value)");
    app->add_option("--market", flags.market_file, "market CSV file");
    add_curve_options(app, &curve);
    app->add_option("--segments", flags.n_segments, "PWL secant count");
    app->add_option("--c-min-fraction", flags.c_min_fraction,
                    "minimum load fraction");
    app->add_option("--ramp-fraction", flags.ramp_fraction,
                    "hourly ramp as a fraction of capacity");
    app->add_option("--startup-energy-fraction",
                    flags.startup_energy_fraction,
                    "startup energy as a fraction of capacity");
    app->add_option("--hydrogen-price", flags.hydrogen_price_usd_per_kg,
                    "hydrogen price in USD/kg");
    app->add_option("--gap", flags.solver.rel_gap, "relative MIP gap");
    app->add_option("--node-limit", flags.solver.node_limit, "node limit");
    app->add_option("--time-limit", flags.solver.time_limit_s,
                    "time limit in seconds");
    app->add_flag("--day-split", flags.day_split,
                  "solve day by day, carrying the plant state over");
  }

  ScenarioConfig resolve() const {
    ScenarioConfig config;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) {
        throw ValidationError("cannot open config file '" + config_file +
                              "'");
      }
      config = parse_scenario_config(in);
    }
    auto set = [&](const char* name, auto member, auto value) {
      if (cmd->count(name)) config.*member = value;
    };
    set("--market", &ScenarioConfig::market_file, flags.market_file);
    set("--segments", &ScenarioConfig::n_segments, flags.n_segments);
    set("--c-min-fraction", &ScenarioConfig::c_min_fraction,
        flags.c_min_fraction);
    set("--ramp-fraction", &ScenarioConfig::ramp_fraction,
        flags.ramp_fraction);
    set("--startup-energy-fraction", &ScenarioConfig::startup_energy_fraction,
        flags.startup_energy_fraction);
    set("--hydrogen-price", &ScenarioConfig::hydrogen_price_usd_per_kg,
        flags.hydrogen_price_usd_per_kg);
    set("--curve-file", &ScenarioConfig::curve_file, curve.curve_file);
    set("--alpha", &ScenarioConfig::alpha, curve.alpha);
    set("--beta", &ScenarioConfig::beta, curve.beta);
    set("--gamma", &ScenarioConfig::gamma, curve.gamma);
    set("--x-min", &ScenarioConfig::x_min, curve.x_min);
    if (cmd->count("--day-split")) config.day_split = flags.day_split;
    if (cmd->count("--gap")) config.solver.rel_gap = flags.solver.rel_gap;
    if (cmd->count("--node-limit")) {
      config.solver.node_limit = flags.solver.node_limit;
    }
    if (cmd->count("--time-limit")) {
      config.solver.time_limit_s = flags.solver.time_limit_s;
    }
    return config;
  }
};

int cmd_fit_curve(const CurveOptions& curve_opts, int segments,
                  double capacity, const std::string& out_path) {
  const ProductionCurve curve = load_curve(curve_opts);
  const PwlCurve pwl = fit_concave_pwl(curve, segments, capacity);

  double max_err = 0.0;
  double best_eff = 0.0;
  double best_eff_x = 0.0;
  const int grid = 10000;
  for (int i = 0; i <= grid; ++i) {
    const double x =
        curve.x_min() + (1.0 - curve.x_min()) * i / static_cast<double>(grid);
    const double truth = curve.value(x);
    const double approx = eval_pwl(pwl, x * capacity, capacity) / capacity;
    max_err = std::max(max_err, truth - approx);
    const double eff = approx / x;
    if (eff > best_eff) {
      best_eff = eff;
      best_eff_x = x;
    }
  }

  std::ostringstream os;
  os.precision(12);
  os << "slope_kg_per_mwh,intercept_norm\n";
  for (const PwlSegment& s : pwl.segments()) {
    os << s.slope << ',' << s.intercept_norm << '\n';
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot open '" + out_path + "'");
    out << os.str();
  }
  std::cout << "segments: " << pwl.n_segments()
            << "  max under-approximation: " << max_err
            << " kg/h per MW  peak efficiency " << best_eff << " kg/MWh at "
            << 100.0 * best_eff_x << "% load\n";
  return 0;
}

int cmd_schedule(ScenarioConfig config, const std::string& out_dir,
                 const std::string& dump_milp) {
  if (config.market_file.empty()) {
    throw ValidationError("schedule needs --market or a config file");
  }
  if (!dump_milp.empty()) {
    CurveOptions opts{config.curve_file, config.alpha, config.beta,
                      config.gamma, config.x_min};
    const ProductionCurve curve = load_curve(opts);
    const PwlCurve pwl =
        fit_concave_pwl(curve, config.n_segments, config.module_capacity_mw);
    std::ifstream in(config.market_file);
    if (!in) {
      throw ValidationError("cannot open market file '" + config.market_file +
                            "'");
    }
    FleetConfig fleet;
    fleet.n_modules = config.n_modules;
    fleet.spec.c_max_mw = config.module_capacity_mw;
    fleet.spec.c_min_fraction = config.c_min_fraction;
    fleet.spec.ramp_fraction = config.ramp_fraction;
    fleet.spec.startup_energy_fraction = config.startup_energy_fraction;
    fleet.spec.hydrogen_price_usd_per_kg = config.hydrogen_price_usd_per_kg;
    fleet.initial_on = config.initial_on;
    fleet.initial_power_mw = config.initial_power_mw;
    const ScheduleProblem problem =
        build_problem(parse_market_csv(in), fleet, pwl);
    const MilpInstance instance = build_milp(problem);
    std::ofstream out(dump_milp);
    if (!out) throw ValidationError("cannot open '" + dump_milp + "'");
    write_milp_text(instance, out);
    std::cout << "MILP written to " << dump_milp << " (" << instance.n_vars()
              << " variables, " << instance.rows.size() << " rows)\n";
  }

  const ScenarioResult result = run_scenario(config);
  std::cout << "scenario " << result.label << ": status "
            << mip_status_name(result.status) << ", gap " << result.gap
            << ", nodes " << result.nodes << "\n"
            << "  power " << result.total_power_mwh << " MWh, hydrogen "
            << result.total_hydrogen_kg << " kg, revenue "
            << result.total_revenue_usd << " USD (grid "
            << result.grid_revenue_usd << " + hydrogen "
            << result.hydrogen_revenue_usd << ")\n";
  if (!out_dir.empty()) {
    for (const std::string& path : emit_outputs(result, out_dir)) {
      std::cout << "  wrote " << path << '\n';
    }
  }
  return 0;
}

int cmd_compare(const ScenarioConfig& base, const std::vector<int>& modules,
                double total_capacity, const std::string& out_dir) {
  std::vector<ScenarioResult> results;
  for (const int m : modules) {
    ScenarioConfig config = base;
    config.n_modules = m;
    config.module_capacity_mw = total_capacity / m;
    config.label.clear();
    results.push_back(run_scenario(config));
    const ScenarioResult& r = results.back();
    std::cout << "solved " << r.label << " (status "
              << mip_status_name(r.status) << ", gap " << r.gap << ", "
              << r.nodes << " nodes, " << r.wall_seconds << " s)\n";
  }
  const ComparisonTable table = compare_configurations(results);
  print_comparison(table, std::cout);
  if (!out_dir.empty()) {
    for (const ScenarioResult& r : results) emit_outputs(r, out_dir);
    std::cout << "wrote " << emit_comparison_csv(table, out_dir) << '\n';
  }
  return 0;
}

int cmd_hour_detail(const ScenarioConfig& base,
                    const std::vector<int>& modules,
                    const std::vector<int>& segment_counts,
                    double total_capacity, int hour,
                    const std::string& out_dir) {
  std::vector<ScenarioResult> results;
  for (const int segments : segment_counts) {
    for (const int m : modules) {
      ScenarioConfig config = base;
      config.n_segments = segments;
      config.n_modules = m;
      config.module_capacity_mw = total_capacity / m;
      config.label.clear();
      results.push_back(run_scenario(config));
    }
  }
  const std::vector<HourDetailRow> rows = hour_detail(results, hour);
  std::cout << "hour " << hour << " detail:\n";
  print_hour_detail(rows, std::cout);
  if (!out_dir.empty()) {
    for (const ScenarioResult& r : results) emit_outputs(r, out_dir);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "h2sched: day-ahead scheduling of a hybrid wind + multi-module "
      "electrolyzer plant"};
  app.require_subcommand(1);

  auto* fit = app.add_subcommand(
      "fit-curve", "fit the concave PWL envelope of a production curve");
  CurveOptions fit_curve_opts;
  add_curve_options(fit, &fit_curve_opts);
  int fit_segments = 88;
  double fit_capacity = 100.0;
  std::string fit_out;
  fit->add_option("--segments", fit_segments, "secant segment count");
  fit->add_option("--capacity", fit_capacity, "module capacity in MW");
  fit->add_option("--out", fit_out, "output CSV (default: stdout)");

  auto* schedule = app.add_subcommand(
      "schedule", "solve one fleet configuration against a market file");
  ScenarioFlags sched_flags;
  sched_flags.add_to(schedule);
  int sched_modules = 1;
  double sched_capacity = 100.0;
  std::string sched_out_dir, sched_dump, sched_label;
  schedule->add_option("--modules", sched_modules, "module count");
  schedule->add_option("--capacity", sched_capacity,
                       "capacity per module in MW");
  schedule->add_option("--label", sched_label, "output label");
  schedule->add_option("--out-dir", sched_out_dir, "output directory");
  schedule->add_option("--dump-milp", sched_dump,
                       "write the MILP in plain text to this path");

  auto* compare = app.add_subcommand(
      "compare",
      "solve several module counts at fixed total capacity and tabulate");
  ScenarioFlags cmp_flags;
  cmp_flags.add_to(compare);
  std::string cmp_out_dir, cmp_modules = "1,2,4,10";
  double cmp_total_capacity = 100.0;
  compare->add_option("--modules", cmp_modules,
                      "comma-separated module counts");
  compare->add_option("--total-capacity", cmp_total_capacity,
                      "total fleet capacity in MW");
  compare->add_option("--out-dir", cmp_out_dir, "output directory");

  auto* detail = app.add_subcommand(
      "hour-detail",
      "per-configuration snapshot of one hour across segment counts");
  ScenarioFlags det_flags;
  det_flags.add_to(detail);
  std::string det_out_dir, det_modules = "1,2,4,10", det_segments = "8,88";
  double det_total_capacity = 100.0;
  int det_hour = 18;
  detail->add_option("--modules", det_modules,
                     "comma-separated module counts");
  detail->add_option("--segment-counts", det_segments,
                     "comma-separated PWL secant counts");
  detail->add_option("--total-capacity", det_total_capacity,
                     "total fleet capacity in MW");
  detail->add_option("--hour", det_hour, "hour index to inspect");
  detail->add_option("--out-dir", det_out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      return cmd_fit_curve(fit_curve_opts, fit_segments, fit_capacity,
                           fit_out);
    }
    if (schedule->parsed()) {
      ScenarioConfig config = sched_flags.resolve();
      if (schedule->count("--modules")) config.n_modules = sched_modules;
      if (schedule->count("--capacity")) {
        config.module_capacity_mw = sched_capacity;
      }
      if (!sched_label.empty()) config.label = sched_label;
      return cmd_schedule(config, sched_out_dir, sched_dump);
    }
    if (compare->parsed()) {
      return cmd_compare(cmp_flags.resolve(), parse_int_list(cmp_modules),
                         cmp_total_capacity, cmp_out_dir);
    }
    if (detail->parsed()) {
      return cmd_hour_detail(det_flags.resolve(), parse_int_list(det_modules),
                             parse_int_list(det_segments), det_total_capacity,
                             det_hour, det_out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
