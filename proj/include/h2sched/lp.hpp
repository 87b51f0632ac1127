#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "h2sched/model.hpp"

namespace h2sched {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;          // in the instance's (maximize) sense
  std::vector<double> x;           // structural variable values
  long iterations = 0;
};

// Solver tolerances. Feasibility and dual tolerances are absolute; the pivot
// threshold rejects unstable ratio-test entries. Bland's rule engages after
// the given number of consecutive degenerate pivots.
inline constexpr double kFeasTol = 1e-9;
inline constexpr double kDualTol = 1e-9;
inline constexpr double kPivotTol = 1e-10;
inline constexpr int kBlandTrigger = 1000;

// Bounded-variable dual simplex over a MilpInstance.
//
// Rows are activated lazily: the solver keeps a working set of rows, solves
// it to optimality, then scans the remaining rows and activates any that the
// current point violates, until the full row set is satisfied. Single-row
// variable bounds are absorbed into the variable boxes up front (bound
// tightening), which also gives every variable a finite box so the all-slack
// basis is dual feasible and no phase-1 is needed.
//
// The basis is refactorized with Eigen's SparseLU every few dozen pivots and
// updated with product-form etas in between. All tie-breaking is by lowest
// index, so identical inputs produce identical runs.
class SimplexSolver {
 public:
  explicit SimplexSolver(const MilpInstance& instance);
  ~SimplexSolver();

  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;

  // Working-bound overlay used by branch-and-bound and probing; reset
  // restores the (tightened) instance bounds.
  void set_var_bounds(int var, double lower, double upper);
  void reset_var_bounds();
  double working_lower(int var) const;
  double working_upper(int var) const;

  // Re-optimizes from the current basis (warm start when possible).
  LpStatus solve();

  double objective() const;
  double primal_value(int var) const;
  std::vector<double> primal_structural() const;
  long total_iterations() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Solves the LP relaxation of `instance` with binaries relaxed to [0, 1],
// after applying the given variable fixings (var index -> value).
LpSolution solve_lp(const MilpInstance& instance,
                    const std::vector<std::pair<int, double>>& fixed = {});

// Largest violation of any row or variable bound of `instance` at `x`.
double lp_infeasibility(const MilpInstance& instance,
                        const std::vector<double>& x);

}  // namespace h2sched
