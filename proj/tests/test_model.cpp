#include "doctest.h"

#include <random>
#include <sstream>

#include "h2sched/model.hpp"
#include "test_support.hpp"

using namespace h2sched;
using h2sched::testing::make_fleet;
using h2sched::testing::make_market;
using h2sched::testing::make_problem;

namespace {

PwlCurve two_segment_curve() { return PwlCurve({{20.0, 0.0}, {10.0, 0.05}}); }

}  // namespace

TEST_CASE("build_problem shapes and validation") {
  SUBCASE("a week with four modules") {
    const ScheduleProblem problem = make_problem(
        168, 4, 25.0, 88, [](int) { return 20.0; }, [](int) { return 120.0; });
    CHECK(problem.horizon() == 168);
    CHECK(problem.n_modules() == 4);
    CHECK(problem.export_limit_mw.size() == 168);
    CHECK(problem.availability_mw.size() == 168);
    for (int t = 0; t < 168; ++t) {
      CHECK(problem.export_limit_mw[t] <= problem.availability_mw[t] + 1e-12);
    }
    CHECK(problem.fleet.initial_on.size() == 4);  // defaulted to all off
  }
  SUBCASE("smallest valid problem") {
    const ScheduleProblem problem = make_problem(
        1, 1, 10.0, 1, [](int) { return 20.0; }, [](int) { return 50.0; });
    CHECK(problem.horizon() == 1);
  }
  SUBCASE("zero module capacity is rejected") {
    CHECK_THROWS_AS(
        build_problem(
            make_market(2, [](int) { return 20.0; }, [](int) { return 50.0; }),
            make_fleet(1, 0.0), two_segment_curve()),
        ValidationError);
  }
  SUBCASE("empty market is rejected") {
    MarketSeries empty;
    CHECK_THROWS_AS(build_problem(empty, make_fleet(1, 10.0),
                                  two_segment_curve()),
                    ValidationError);
  }
}

TEST_CASE("row family counts for T=2, M=1, two segments") {
  const ScheduleProblem problem = build_problem(
      make_market(2, [](int) { return 20.0; }, [](int) { return 50.0; }),
      make_fleet(1, 10.0), two_segment_curve());
  const MilpInstance inst = build_milp(problem);
  const auto counts = inst.row_counts();
  CHECK(counts.at(RowFamily::kHydrogenCurve) == 4);
  CHECK(counts.at(RowFamily::kOperatingRange) == 4);
  CHECK(counts.at(RowFamily::kExportLimit) == 2);
  CHECK(counts.at(RowFamily::kRampUp) == 2);
  CHECK(counts.at(RowFamily::kRampDown) == 2);
  CHECK(counts.at(RowFamily::kStartupLogicA) == 2);
  CHECK(counts.at(RowFamily::kStartupLogicB) == 2);
  CHECK(counts.at(RowFamily::kStartupLogicC) == 2);
  CHECK(counts.at(RowFamily::kStartupCost) == 2);
  CHECK(counts.at(RowFamily::kPowerBalance) == 2);
  CHECK(inst.n_vars() == 5 * 2 * 1 + 2);
}

TEST_CASE("row counts follow the closed-form family formulas") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> ut(1, 6);
  std::uniform_int_distribution<int> um(1, 4);
  std::uniform_int_distribution<int> useg(1, 12);
  for (int trial = 0; trial < 10; ++trial) {
    const int T = ut(rng);
    const int M = um(rng);
    const int n_secants = useg(rng);
    const ScheduleProblem problem = make_problem(
        T, M, 10.0, n_secants, [](int) { return 20.0; },
        [](int) { return 80.0; });
    const int I = problem.pwl.n_segments();
    const MilpInstance inst = build_milp(problem);
    const auto counts = inst.row_counts();
    CHECK(counts.at(RowFamily::kHydrogenCurve) == I * T * M);
    CHECK(counts.at(RowFamily::kOperatingRange) == 2 * T * M);
    CHECK(counts.at(RowFamily::kExportLimit) == T);
    CHECK(counts.at(RowFamily::kRampUp) + counts.at(RowFamily::kRampDown) ==
          2 * T * M);
    CHECK(counts.at(RowFamily::kStartupLogicA) +
              counts.at(RowFamily::kStartupLogicB) +
              counts.at(RowFamily::kStartupLogicC) ==
          3 * T * M);
    CHECK(counts.at(RowFamily::kStartupCost) == T * M);
    CHECK(counts.at(RowFamily::kPowerBalance) == T);
    CHECK(static_cast<int>(inst.rows.size()) ==
          I * T * M + 2 * T * M + T + 2 * T * M + 3 * T * M + T * M + T);

    // every variable appears in at least one row
    std::vector<char> used(inst.n_vars(), 0);
    for (const MilpRow& row : inst.rows) {
      for (const auto& [var, coef] : row.coeffs) used[var] = 1;
    }
    for (int j = 0; j < inst.n_vars(); ++j) CHECK(used[j] == 1);
  }
}

TEST_CASE("objective carries prices once") {
  const ScheduleProblem problem = build_problem(
      make_market(3, [](int t) { return 10.0 + t; }, [](int) { return 50.0; }),
      make_fleet(2, 10.0), two_segment_curve());
  const MilpInstance inst = build_milp(problem);
  for (int t = 0; t < 3; ++t) {
    CHECK(inst.objective[inst.var_p_grid(t)] == doctest::Approx(10.0 + t));
    for (int m = 0; m < 2; ++m) {
      CHECK(inst.objective[inst.var_h(t, m)] == doctest::Approx(2.0));
      CHECK(inst.objective[inst.var_p_e(t, m)] == 0.0);
      CHECK(inst.objective[inst.var_p_su(t, m)] == 0.0);
      CHECK(inst.objective[inst.var_z_on(t, m)] == 0.0);
      CHECK(inst.objective[inst.var_z_su(t, m)] == 0.0);
    }
  }
}

TEST_CASE("extract_schedule") {
  const ScheduleProblem problem = build_problem(
      make_market(2, [](int) { return 20.0; }, [](int) { return 50.0; }),
      make_fleet(1, 10.0), two_segment_curve());
  const MilpInstance inst = build_milp(problem);

  SUBCASE("all-zero vector gives the zero schedule") {
    std::vector<double> x(inst.n_vars(), 0.0);
    const Schedule s = extract_schedule(problem, x, 0.0);
    CHECK(s.objective_value_usd == doctest::Approx(0.0));
    CHECK(s.total_h_kg() == doctest::Approx(0.0));
    CHECK(verify_schedule(problem, s).feasible(1e-9));
  }
  SUBCASE("fractional binary is rejected") {
    std::vector<double> x(inst.n_vars(), 0.0);
    x[inst.var_z_on(0, 0)] = 0.5;
    CHECK_THROWS_WITH_AS(extract_schedule(problem, x, 0.0),
                         doctest::Contains("fractional binary"),
                         ValidationError);
  }
  SUBCASE("objective mismatch is rejected") {
    std::vector<double> x(inst.n_vars(), 0.0);
    CHECK_THROWS_AS(extract_schedule(problem, x, 123.0), ValidationError);
  }
  SUBCASE("wrong vector length is rejected") {
    std::vector<double> x(3, 0.0);
    CHECK_THROWS_AS(extract_schedule(problem, x, 0.0), ValidationError);
  }
}

TEST_CASE("verify_schedule residual arithmetic") {
  const ScheduleProblem problem = build_problem(
      make_market(2, [](int) { return 20.0; }, [](int) { return 100.0; }),
      make_fleet(1, 10.0), two_segment_curve());
  const double ramp = problem.fleet.spec.ramp_mw();  // 1.5 MW

  Schedule s;
  s.horizon = 2;
  s.n_modules = 1;
  s.p_grid_mw = {0.0, 0.0};
  s.p_e_mw = {0.0, 2.0 * ramp};
  s.h_kg = {0.0, 0.0};
  s.p_su_mwh = {problem.fleet.spec.startup_energy_mwh(), 0.0};
  s.z_on = {1, 1};
  s.z_su = {1, 0};
  s.objective_value_usd = 0.0;

  const VerifyReport report = verify_schedule(problem, s);
  // the ramp jump of 2R overshoots the limit by exactly R
  CHECK(report.max_violation.at(RowFamily::kRampUp) ==
        doctest::Approx(ramp).epsilon(1e-12));
  CHECK(report.max_violation.at(RowFamily::kRampDown) <= 0.0 + 1e-12);
  CHECK_FALSE(report.feasible(1e-6));

  // fixing the jump makes the schedule feasible and tight
  s.p_e_mw[1] = ramp;
  s.h_kg[1] = eval_pwl(problem.pwl, ramp, 10.0);
  const VerifyReport fixed = verify_schedule(problem, s);
  CHECK(fixed.feasible(1e-9));
  CHECK(fixed.hydrogen_tightness_gap_kg <= 1e-12);
  CHECK(fixed.objective_usd ==
        doctest::Approx(2.0 * s.h_kg[1]).epsilon(1e-12));
}

TEST_CASE("milp text dump mentions every section") {
  const ScheduleProblem problem = build_problem(
      make_market(1, [](int) { return 20.0; }, [](int) { return 50.0; }),
      make_fleet(1, 10.0), two_segment_curve());
  const MilpInstance inst = build_milp(problem);
  std::ostringstream os;
  write_milp_text(inst, os);
  const std::string text = os.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("hydrogen_curve_t0_m0_s0") != std::string::npos);
  CHECK(text.find("power_balance_t0") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("z_on_t0_m0") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("spec validation") {
  ElectrolyzerSpec spec;
  spec.c_max_mw = 10.0;
  CHECK_NOTHROW(spec.validate());
  spec.c_min_fraction = 1.5;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.c_min_fraction = 0.1;
  spec.ramp_fraction = 0.0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);

  FleetConfig fleet = make_fleet(2, 10.0);
  fleet.initial_power_mw = {5.0, 20.0};  // above c_max
  CHECK_THROWS_AS(fleet.validate(), ValidationError);
  fleet.initial_power_mw = {5.0};  // wrong length
  CHECK_THROWS_AS(fleet.validate(), ValidationError);
}
