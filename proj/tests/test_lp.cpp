#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "h2sched/lp.hpp"
#include "h2sched/mip.hpp"

using namespace h2sched;

namespace {

// Container with no scheduling rows; variables are general-purpose. The
// continuous slots of a 1x1 instance stand in for x, y, ...
MilpInstance blank_instance() {
  MilpInstance inst(1, 1);
  inst.rows.clear();
  return inst;
}

MilpRow le_row(std::vector<std::pair<std::int32_t, double>> coeffs,
               double upper) {
  return MilpRow{RowFamily::kPowerBalance, -1, -1, -1,
                 -std::numeric_limits<double>::infinity(), upper,
                 std::move(coeffs)};
}

MilpRow ge_row(std::vector<std::pair<std::int32_t, double>> coeffs,
               double lower) {
  return MilpRow{RowFamily::kPowerBalance, -1, -1, -1, lower,
                 std::numeric_limits<double>::infinity(), std::move(coeffs)};
}

}  // namespace

TEST_CASE("two-variable LP by hand") {
  MilpInstance inst = blank_instance();
  const int x = inst.var_h(0, 0);
  const int y = inst.var_p_e(0, 0);
  inst.objective[x] = 2.0;
  inst.objective[y] = 3.0;
  inst.rows.push_back(le_row({{x, 1.0}, {y, 1.0}}, 4.0));
  inst.rows.push_back(le_row({{x, 1.0}}, 3.0));

  const LpSolution sol = solve_lp(inst);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(sol.x[x] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.x[y] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(lp_infeasibility(inst, sol.x) <= 1e-9);
}

TEST_CASE("LP with a binding equality and bounded ranges") {
  MilpInstance inst = blank_instance();
  const int x = inst.var_h(0, 0);
  const int y = inst.var_p_e(0, 0);
  const int z = inst.var_p_su(0, 0);
  inst.objective[x] = 1.0;
  inst.objective[y] = -1.0;
  inst.objective[z] = 0.5;
  // x + y + z = 2, x - y <= 1, z <= 0.5
  inst.rows.push_back(MilpRow{RowFamily::kStartupCost, -1, -1, -1, 2.0, 2.0,
                              {{x, 1.0}, {y, 1.0}, {z, 1.0}}});
  inst.rows.push_back(le_row({{x, 1.0}, {y, -1.0}}, 1.0));
  inst.rows.push_back(le_row({{z, 1.0}}, 0.5));

  const LpSolution sol = solve_lp(inst);
  REQUIRE(sol.status == LpStatus::kOptimal);
  // z = 0.5, then maximize x - y with x + y = 1.5, x - y <= 1:
  // x = 1.25, y = 0.25, objective 1.25 - 0.25 + 0.25 = 1.25
  CHECK(sol.objective == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(lp_infeasibility(inst, sol.x) <= 1e-9);
}

TEST_CASE("infeasible LP is reported") {
  MilpInstance inst = blank_instance();
  const int x = inst.var_h(0, 0);
  const int y = inst.var_p_e(0, 0);
  inst.rows.push_back(le_row({{x, 1.0}, {y, 1.0}}, 1.0));
  inst.rows.push_back(ge_row({{x, 1.0}, {y, 1.0}}, 3.0));
  CHECK(solve_lp(inst).status == LpStatus::kInfeasible);
}

TEST_CASE("infeasible variable box is reported") {
  MilpInstance inst = blank_instance();
  const int x = inst.var_h(0, 0);
  inst.rows.push_back(ge_row({{x, 1.0}}, 2.0));
  inst.rows.push_back(le_row({{x, 1.0}}, 1.0));
  CHECK(solve_lp(inst).status == LpStatus::kInfeasible);
}

TEST_CASE("unbounded LP is reported") {
  MilpInstance inst = blank_instance();
  inst.objective[inst.var_h(0, 0)] = 1.0;
  CHECK(solve_lp(inst).status == LpStatus::kUnbounded);
}

TEST_CASE("fixed variables are honored") {
  MilpInstance inst = blank_instance();
  const int x = inst.var_h(0, 0);
  const int y = inst.var_p_e(0, 0);
  inst.objective[x] = 2.0;
  inst.objective[y] = 3.0;
  inst.rows.push_back(le_row({{x, 1.0}, {y, 1.0}}, 4.0));
  const LpSolution sol = solve_lp(inst, {{y, 1.0}});
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[y] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(2.0 * 3.0 + 3.0).epsilon(1e-9));
}

TEST_CASE("adding a row never improves the maximum") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    MilpInstance inst = blank_instance();
    const int x = inst.var_h(0, 0);
    const int y = inst.var_p_e(0, 0);
    const int w = inst.var_p_su(0, 0);
    inst.objective[x] = coef(rng);
    inst.objective[y] = coef(rng);
    inst.objective[w] = coef(rng);
    for (int r = 0; r < 3; ++r) {
      inst.rows.push_back(le_row({{x, std::abs(coef(rng)) + 0.1},
                                  {y, std::abs(coef(rng)) + 0.1},
                                  {w, std::abs(coef(rng)) + 0.1}},
                                 2.0 + std::abs(coef(rng))));
    }
    const LpSolution before = solve_lp(inst);
    REQUIRE(before.status == LpStatus::kOptimal);
    inst.rows.push_back(le_row({{x, 1.0}, {y, 1.0}, {w, 1.0}}, 1.5));
    const LpSolution after = solve_lp(inst);
    REQUIRE(after.status == LpStatus::kOptimal);
    CHECK(after.objective <= before.objective + 1e-9);
  }
}

TEST_CASE("deterministic resolve") {
  MilpInstance inst = blank_instance();
  const int x = inst.var_h(0, 0);
  const int y = inst.var_p_e(0, 0);
  inst.objective[x] = 1.0;
  inst.objective[y] = 1.0;
  inst.rows.push_back(le_row({{x, 2.0}, {y, 1.0}}, 5.0));
  inst.rows.push_back(le_row({{x, 1.0}, {y, 3.0}}, 6.0));
  const LpSolution a = solve_lp(inst);
  const LpSolution b = solve_lp(inst);
  REQUIRE(a.status == LpStatus::kOptimal);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
}

TEST_CASE("warm re-solve after bound changes matches a cold solve") {
  MilpInstance inst = blank_instance();
  const int x = inst.var_h(0, 0);
  const int y = inst.var_p_e(0, 0);
  const int z = inst.var_z_on(0, 0);
  inst.var_upper[z] = 1.0;
  inst.objective[x] = 2.0;
  inst.objective[y] = 1.0;
  inst.objective[z] = 0.3;
  inst.rows.push_back(le_row({{x, 1.0}, {y, 1.0}, {z, 2.0}}, 4.0));
  inst.rows.push_back(le_row({{x, 1.0}, {z, -1.0}}, 2.0));

  SimplexSolver warm(inst);
  REQUIRE(warm.solve() == LpStatus::kOptimal);
  warm.set_var_bounds(z, 0.0, 0.0);
  REQUIRE(warm.solve() == LpStatus::kOptimal);
  const double warm_obj = warm.objective();

  const LpSolution cold = solve_lp(inst, {{z, 0.0}});
  REQUIRE(cold.status == LpStatus::kOptimal);
  CHECK(warm_obj == doctest::Approx(cold.objective).epsilon(1e-9));

  warm.reset_var_bounds();
  REQUIRE(warm.solve() == LpStatus::kOptimal);
  const LpSolution cold2 = solve_lp(inst);
  CHECK(warm.objective() == doctest::Approx(cold2.objective).epsilon(1e-9));
}
