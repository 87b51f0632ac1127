#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "h2sched/scenario.hpp"
#include "test_support.hpp"

using namespace h2sched;
using h2sched::testing::make_market;

namespace {

ScenarioConfig small_config(int modules, double capacity, int segments) {
  ScenarioConfig config;
  config.market_file = "in-memory";
  config.n_modules = modules;
  config.module_capacity_mw = capacity;
  config.n_segments = segments;
  return config;
}

ScenarioResult synthetic_result(int modules, double capacity, double power,
                                double hydrogen, double revenue) {
  ScenarioResult r;
  r.label = "synthetic";
  r.market_file = "in-memory";
  r.n_modules = modules;
  r.module_capacity_mw = capacity;
  r.n_segments = 88;
  r.horizon = 1;
  r.hydrogen_price_usd_per_kg = 2.0;
  r.total_power_mwh = power;
  r.total_hydrogen_kg = hydrogen;
  r.total_revenue_usd = revenue;
  r.hydrogen_revenue_usd = 2.0 * hydrogen;
  r.grid_revenue_usd = revenue - r.hydrogen_revenue_usd;
  r.p_grid_mw = {0.0};
  r.p_e_total_mw = {power};
  r.h_total_kg = {hydrogen};
  r.price_usd_mwh = {20.0};
  r.status = MipStatus::kOptimal;
  r.schedule.horizon = 1;
  r.schedule.n_modules = modules;
  r.schedule.p_grid_mw.assign(1, 0.0);
  r.schedule.p_e_mw.assign(modules, power / modules);
  r.schedule.h_kg.assign(modules, hydrogen / modules);
  r.schedule.p_su_mwh.assign(modules, 0.0);
  r.schedule.z_on.assign(modules, 1);
  r.schedule.z_su.assign(modules, 0);
  return r;
}

}  // namespace

TEST_CASE("run_scenario totals and revenue decomposition") {
  const MarketSeries market = make_market(
      6, [](int t) { return t == 3 ? 45.0 : 12.0; },
      [](int) { return 30.0; });
  const ScenarioResult result =
      run_scenario(small_config(2, 10.0, 8), market);

  CHECK(result.horizon == 6);
  double power = 0.0, hydrogen = 0.0;
  for (int t = 0; t < 6; ++t) {
    power += result.p_e_total_mw[t];
    hydrogen += result.h_total_kg[t];
  }
  CHECK(result.total_power_mwh == doctest::Approx(power).epsilon(1e-9));
  CHECK(result.total_hydrogen_kg == doctest::Approx(hydrogen).epsilon(1e-9));
  CHECK(result.total_revenue_usd ==
        doctest::Approx(result.grid_revenue_usd + result.hydrogen_revenue_usd)
            .epsilon(1e-9));
  CHECK(result.status == MipStatus::kOptimal);
}

TEST_CASE("zero-price zero-wind market gives all-zero totals") {
  const MarketSeries market =
      make_market(4, [](int) { return 0.0; }, [](int) { return 0.0; });
  const ScenarioResult result =
      run_scenario(small_config(1, 10.0, 4), market);
  CHECK(result.total_power_mwh == doctest::Approx(0.0));
  CHECK(result.total_hydrogen_kg == doctest::Approx(0.0));
  CHECK(result.total_revenue_usd == doctest::Approx(0.0));
}

TEST_CASE("comparison table percent math") {
  const std::vector<ScenarioResult> results = {
      synthetic_result(1, 100.0, 378.80, 7408.77, 17369.00),
      synthetic_result(10, 10.0, 407.20, 7724.45, 18882.34),
  };
  const ComparisonTable table = compare_configurations(results);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].pct_power == doctest::Approx(0.0));
  CHECK(table.rows[0].pct_hydrogen == doctest::Approx(0.0));
  CHECK(table.rows[0].pct_revenue == doctest::Approx(0.0));
  CHECK(table.rows[1].pct_power == doctest::Approx(7.50).epsilon(1e-3));
  CHECK(table.rows[1].pct_hydrogen == doctest::Approx(4.26).epsilon(1e-2));
  CHECK(table.rows[1].pct_revenue == doctest::Approx(8.71).epsilon(1e-2));
}

TEST_CASE("identical results give zero percent increases") {
  const std::vector<ScenarioResult> results = {
      synthetic_result(1, 100.0, 100.0, 1000.0, 3000.0),
      synthetic_result(2, 50.0, 100.0, 1000.0, 3000.0),
  };
  const ComparisonTable table = compare_configurations(results);
  for (const ComparisonRow& row : table.rows) {
    CHECK(row.pct_power == doctest::Approx(0.0));
    CHECK(row.pct_hydrogen == doctest::Approx(0.0));
    CHECK(row.pct_revenue == doctest::Approx(0.0));
  }
}

TEST_CASE("comparison rejects mixed capacities") {
  const std::vector<ScenarioResult> results = {
      synthetic_result(1, 100.0, 1.0, 1.0, 1.0),
      synthetic_result(2, 80.0, 1.0, 1.0, 1.0),  // 160 MW total
  };
  CHECK_THROWS_AS(compare_configurations(results), ValidationError);
}

TEST_CASE("hour detail rows") {
  std::vector<ScenarioResult> results = {
      synthetic_result(1, 100.0, 13.2, 260.6, 521.21),
      synthetic_result(4, 25.0, 13.2, 253.08, 506.17),
  };
  results[0].p_grid_mw = {10.0};
  const auto rows = hour_detail(results, 0);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n_modules == 1);
  CHECK(rows[0].hydrogen_kg == doctest::Approx(260.6));
  // hydrogen-only profit is exactly the hydrogen price times the mass
  CHECK(rows[0].hydrogen_profit_usd == doctest::Approx(521.2).epsilon(1e-6));
  // the grid decomposition adds that hour's sales
  CHECK(rows[0].total_profit_usd ==
        doctest::Approx(521.2 + 20.0 * 10.0).epsilon(1e-6));
  CHECK_THROWS_AS(hour_detail(results, 5), ValidationError);
}

TEST_CASE("emitted schedule CSV has the documented shape") {
  const int T = 24, M = 4;
  ScenarioResult r = synthetic_result(M, 25.0, 0.0, 0.0, 0.0);
  r.horizon = T;
  r.p_grid_mw.assign(T, 1.0);
  r.p_e_total_mw.assign(T, 2.0);
  r.h_total_kg.assign(T, 3.0);
  r.price_usd_mwh.assign(T, 20.0);
  r.schedule.horizon = T;
  r.schedule.n_modules = M;
  r.schedule.p_e_mw.assign(T * M, 0.5);
  r.schedule.h_kg.assign(T * M, 0.75);
  r.schedule.p_grid_mw.assign(T, 1.0);
  r.schedule.p_su_mwh.assign(T * M, 0.0);
  r.schedule.z_on.assign(T * M, 1);
  r.schedule.z_su.assign(T * M, 0);

  const std::string dir = "scenario_test_out";
  const auto written = emit_outputs(r, dir, true, false);
  REQUIRE(written.size() == 1);
  std::ifstream in(written[0]);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  // hour index plus (1 + 1 + 2M) value columns
  CHECK(std::count(header.begin(), header.end(), ',') == 1 + 1 + 2 * M);
  int data_rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++data_rows;
  }
  CHECK(data_rows == T);
  std::filesystem::remove_all(dir);
}

TEST_CASE("metrics JSON round-trips") {
  ScenarioResult r = synthetic_result(2, 50.0, 111.5, 2222.25, 7777.125);
  r.nodes = 42;
  r.gap = 1e-7;
  const std::string text = scenario_metrics_json(r);
  const ScenarioResult back = scenario_metrics_from_json(text);
  CHECK(back.n_modules == r.n_modules);
  CHECK(back.module_capacity_mw == doctest::Approx(r.module_capacity_mw));
  CHECK(back.total_power_mwh == doctest::Approx(r.total_power_mwh));
  CHECK(back.total_hydrogen_kg == doctest::Approx(r.total_hydrogen_kg));
  CHECK(back.total_revenue_usd == doctest::Approx(r.total_revenue_usd));
  CHECK(back.nodes == 42);
  CHECK(back.status == MipStatus::kOptimal);
  CHECK(back.p_grid_mw == r.p_grid_mw);
  CHECK(back.price_usd_mwh == r.price_usd_mwh);
}

TEST_CASE("scenario config parsing") {
  std::istringstream in(
      "# demo scenario\n"
      "market_file = data/demo_week.csv\n"
      "modules = 4\n"
      "module_capacity_mw = 25\n"
      "segments = 88\n"
      "hydrogen_price_usd_per_kg = 2.5\n"
      "day_split = true\n"
      "rel_gap = 1e-5\n"
      "initial_on = 1, 0, 1, 0\n"
      "initial_power_mw = 5, 0, 2.5, 0\n");
  const ScenarioConfig config = parse_scenario_config(in);
  CHECK(config.market_file == "data/demo_week.csv");
  CHECK(config.n_modules == 4);
  CHECK(config.module_capacity_mw == doctest::Approx(25.0));
  CHECK(config.n_segments == 88);
  CHECK(config.hydrogen_price_usd_per_kg == doctest::Approx(2.5));
  CHECK(config.day_split);
  CHECK(config.solver.rel_gap == doctest::Approx(1e-5));
  CHECK(config.initial_on == std::vector<std::uint8_t>{1, 0, 1, 0});
  CHECK(config.initial_power_mw == std::vector<double>{5.0, 0.0, 2.5, 0.0});

  std::istringstream bad("modules = 4\nwhatever = 3\n");
  CHECK_THROWS_WITH_AS(parse_scenario_config(bad),
                       doctest::Contains("unknown key"), ValidationError);
}

TEST_CASE("day-split chains the plant state and stays feasible") {
  // 30 hours -> a 24-hour chunk plus a 6-hour chunk with a hot start
  const MarketSeries market = make_market(
      30, [](int t) { return t % 24 < 12 ? 10.0 : 35.0; },
      [](int) { return 25.0; });
  ScenarioConfig config = small_config(1, 10.0, 8);
  config.day_split = true;
  const ScenarioResult split = run_scenario(config, market);

  config.day_split = false;
  const ScenarioResult whole = run_scenario(config, market);

  // splitting the horizon can only restrict the weekly problem
  CHECK(split.total_revenue_usd <=
        whole.total_revenue_usd +
            1e-6 * std::max(1.0, std::abs(whole.total_revenue_usd)));
  CHECK(split.horizon == 30);
}
