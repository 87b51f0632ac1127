#pragma once

#include <optional>
#include <string>

#include "h2sched/lp.hpp"
#include "h2sched/model.hpp"

namespace h2sched {

struct MipOptions {
  double rel_gap = 1e-6;
  double integrality_tol = 1e-6;
  long node_limit = -1;          // < 0: unlimited
  double time_limit_s = -1.0;    // < 0: unlimited
  std::string branching = "most-fractional";
  std::string node_selection = "best-bound-dive";

  void validate() const;
};

enum class MipStatus { kOptimal, kGapReached, kLimitHit, kInfeasible };

const char* mip_status_name(MipStatus status);

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  std::optional<Schedule> incumbent;
  double best_bound = 0.0;
  double gap = 0.0;              // relative, vs max(1, |incumbent|)
  long nodes = 0;
  long lp_iterations = 0;
  double wall_seconds = 0.0;
  long leaves_evaluated = 0;     // enumeration oracle only
};

// Best-bound branch and bound over the on/off binaries. Branching is on the
// most fractional z_on (z_su follows from the startup logic); from each
// best-bound node the search dives depth-first, rounding the branch variable
// to its nearest value first, to find incumbents early. A rounding probe at
// the root and periodically afterwards fixes the whole commitment vector to
// the rounded LP values and solves the remaining LP for a quick incumbent.
// Every incumbent is checked by verify_schedule before acceptance.
MipResult solve_milp(const ScheduleProblem& problem,
                     const MipOptions& options = {});

// Ground-truth reference for small instances: enumerates every z_on pattern
// (z_su is implied by the startup logic), solves the continuous LP per leaf,
// and returns the best feasible leaf. Requires T * M <= 16.
MipResult enumerate_oracle(const ScheduleProblem& problem);

// Greedy feasible schedule used as the initial incumbent: pick the largest
// module count that wind supports everywhere, start those modules in hour 0,
// run them at an equal, ramp-smoothed share of the wind, and sell whatever
// the export limit allows on positively priced hours. Returns nothing when
// the plant starts from a state the greedy rules cannot continue.
std::optional<Schedule> warm_start_heuristic(const ScheduleProblem& problem);

}  // namespace h2sched
