#include "h2sched/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace h2sched {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double prune_cut(double incumbent_obj, double rel_gap) {
  if (incumbent_obj == kNegInf) return kNegInf;
  return incumbent_obj + rel_gap * std::max(1.0, std::abs(incumbent_obj));
}

}  // namespace

void MipOptions::validate() const {
  if (!(rel_gap > 0.0) || !(integrality_tol > 0.0)) {
    throw ValidationError("MIP tolerances must be positive");
  }
  if (branching != "most-fractional") {
    throw ValidationError("unknown branching rule '" + branching + "'");
  }
  if (node_selection != "best-bound-dive") {
    throw ValidationError("unknown node selection rule '" + node_selection +
                          "'");
  }
}

const char* mip_status_name(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kGapReached: return "gap_reached";
    case MipStatus::kLimitHit: return "limit_hit";
    case MipStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

struct Node {
  double bound;
  long id;
  std::vector<std::pair<int, signed char>> fixings;  // z_on var -> 0/1
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    return a.id > b.id;                                // oldest first
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const ScheduleProblem& problem, const MipOptions& options)
      : problem_(problem),
        options_(options),
        instance_(build_milp(problem)),
        engine_(instance_) {
    const int T = problem.horizon();
    const int M = problem.n_modules();
    z_on_.reserve(T * M);
    z_su_.reserve(T * M);
    for (int t = 0; t < T; ++t) {
      for (int m = 0; m < M; ++m) {
        z_on_.push_back(instance_.var_z_on(t, m));
        z_su_.push_back(instance_.var_z_su(t, m));
      }
    }
  }

  MipResult run();

 private:
  bool try_incumbent(const std::vector<double>& x, double objective);
  void apply_fixings(const std::vector<std::pair<int, signed char>>& fixings);
  void probe(const std::vector<double>& z_values, bool round_up,
             const std::vector<std::pair<int, signed char>>& restore);
  int pick_branch_var(std::vector<double>* z_values) const;
  bool binaries_integral() const;
  bool limits_exceeded() const;

  const ScheduleProblem& problem_;
  const MipOptions& options_;
  MilpInstance instance_;
  SimplexSolver engine_;
  std::vector<int> z_on_;
  std::vector<int> z_su_;

  double incumbent_obj_ = kNegInf;
  std::optional<Schedule> incumbent_;
  long processed_ = 0;
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

bool BranchAndBound::limits_exceeded() const {
  if (options_.node_limit >= 0 && processed_ >= options_.node_limit) {
    return true;
  }
  if (options_.time_limit_s > 0.0) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    if (elapsed > options_.time_limit_s) return true;
  }
  return false;
}

bool BranchAndBound::try_incumbent(const std::vector<double>& x,
                                   double objective) {
  if (objective <= incumbent_obj_ + 1e-12) return false;
  Schedule schedule;
  try {
    schedule = extract_schedule(problem_, x, objective);
  } catch (const ValidationError&) {
    return false;
  }
  if (!verify_schedule(problem_, schedule).feasible(1e-6)) return false;
  incumbent_ = std::move(schedule);
  incumbent_obj_ = objective;
  return true;
}

void BranchAndBound::apply_fixings(
    const std::vector<std::pair<int, signed char>>& fixings) {
  engine_.reset_var_bounds();
  for (const auto& [var, val] : fixings) {
    engine_.set_var_bounds(var, val, val);
  }
}

int BranchAndBound::pick_branch_var(std::vector<double>* z_values) const {
  z_values->clear();
  int branch_var = -1;
  double best_frac = options_.integrality_tol;
  for (const int var : z_on_) {
    const double v = engine_.primal_value(var);
    z_values->push_back(v);
    const double frac = std::abs(v - std::round(v));
    if (frac > best_frac + 1e-15) {
      best_frac = frac;
      branch_var = var;
    }
  }
  return branch_var;
}

bool BranchAndBound::binaries_integral() const {
  for (const int var : z_su_) {
    const double v = engine_.primal_value(var);
    if (std::abs(v - std::round(v)) > options_.integrality_tol) return false;
  }
  return true;
}

void BranchAndBound::probe(
    const std::vector<double>& z_values, bool round_up,
    const std::vector<std::pair<int, signed char>>& restore) {
  engine_.reset_var_bounds();
  for (std::size_t i = 0; i < z_on_.size(); ++i) {
    const double v = z_values[i];
    const signed char fixed =
        round_up ? (v > options_.integrality_tol ? 1 : 0)
                 : (v >= 0.5 ? 1 : 0);
    engine_.set_var_bounds(z_on_[i], fixed, fixed);
  }
  if (engine_.solve() == LpStatus::kOptimal && binaries_integral()) {
    try_incumbent(engine_.primal_structural(), engine_.objective());
  }
  apply_fixings(restore);
}

MipResult BranchAndBound::run() {
  MipResult result;

  if (auto warm = warm_start_heuristic(problem_)) {
    if (verify_schedule(problem_, *warm).feasible(1e-6)) {
      incumbent_ = *warm;
      incumbent_obj_ = warm->objective_value_usd;
    }
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push(Node{std::numeric_limits<double>::infinity(), next_id++, {}});

  bool limit_hit = false;
  double stop_bound = kNegInf;
  std::vector<double> z_values;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound <= prune_cut(incumbent_obj_, options_.rel_gap)) {
      // Best-first order: every remaining node is no better.
      stop_bound = std::max(stop_bound, node.bound);
      break;
    }
    apply_fixings(node.fixings);
    double parent_bound = node.bound;
    bool probed_root = false;

    while (true) {  // depth-first dive
      if (limits_exceeded()) {
        open.push(Node{parent_bound, next_id++, node.fixings});
        limit_hit = true;
        break;
      }
      ++processed_;
      const LpStatus status = engine_.solve();
      if (status != LpStatus::kOptimal) break;  // infeasible leaf
      const double bound = std::min(engine_.objective(), parent_bound);
      if (bound <= prune_cut(incumbent_obj_, options_.rel_gap)) break;

      const int branch_var = pick_branch_var(&z_values);
      if (branch_var < 0) {
        if (binaries_integral()) {
          try_incumbent(engine_.primal_structural(), engine_.objective());
        }
        break;
      }

      const bool probe_now =
          (processed_ == 1) || (processed_ % 64 == 0 && !probed_root);
      if (probe_now) {
        probe(z_values, /*round_up=*/true, node.fixings);
        if (processed_ == 1) {
          probe(z_values, /*round_up=*/false, node.fixings);
        }
        probed_root = true;
        continue;  // re-solve the node LP after bound restoration
      }

      const double v = z_values[std::find(z_on_.begin(), z_on_.end(),
                                          branch_var) -
                                z_on_.begin()];
      const signed char preferred = v >= 0.5 ? 1 : 0;
      auto other_fixings = node.fixings;
      other_fixings.emplace_back(branch_var,
                                 static_cast<signed char>(1 - preferred));
      open.push(Node{bound, next_id++, std::move(other_fixings)});

      node.fixings.emplace_back(branch_var, preferred);
      engine_.set_var_bounds(branch_var, preferred, preferred);
      parent_bound = bound;
    }
    if (limit_hit) break;
  }

  while (!open.empty()) {
    stop_bound = std::max(stop_bound, open.top().bound);
    open.pop();
  }
  stop_bound = std::max(stop_bound, incumbent_obj_);

  result.nodes = processed_;
  result.lp_iterations = engine_.total_iterations();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
  if (!incumbent_) {
    result.status = limit_hit ? MipStatus::kLimitHit : MipStatus::kInfeasible;
    result.best_bound = limit_hit ? stop_bound : 0.0;
    result.gap = std::numeric_limits<double>::infinity();
    return result;
  }
  result.incumbent = incumbent_;
  result.best_bound = stop_bound;
  result.gap = std::max(0.0, (stop_bound - incumbent_obj_) /
                                 std::max(1.0, std::abs(incumbent_obj_)));
  if (limit_hit && result.gap > options_.rel_gap) {
    result.status = MipStatus::kLimitHit;
  } else if (result.gap <= std::min(options_.rel_gap, 1e-6)) {
    result.status = MipStatus::kOptimal;
  } else {
    result.status = MipStatus::kGapReached;
  }
  return result;
}

}  // namespace

MipResult solve_milp(const ScheduleProblem& problem,
                     const MipOptions& options) {
  options.validate();
  BranchAndBound solver(problem, options);
  return solver.run();
}

MipResult enumerate_oracle(const ScheduleProblem& problem) {
  const int T = problem.horizon();
  const int M = problem.n_modules();
  const long tm = static_cast<long>(T) * M;
  if (tm > 16) {
    throw ValidationError(
        "instance too large for exhaustive enumeration: T*M = " +
        std::to_string(tm) + " > 16");
  }
  const auto start = std::chrono::steady_clock::now();
  MilpInstance instance = build_milp(problem);
  SimplexSolver engine(instance);

  const long n_patterns = 1L << tm;
  double best_obj = kNegInf;
  std::vector<double> best_x;

  for (long pattern = 0; pattern < n_patterns; ++pattern) {
    engine.reset_var_bounds();
    for (int t = 0; t < T; ++t) {
      for (int m = 0; m < M; ++m) {
        const bool on = (pattern >> (t * M + m)) & 1;
        const bool prev_on = t > 0 ? ((pattern >> ((t - 1) * M + m)) & 1)
                                   : (problem.fleet.initial_on[m] != 0);
        const bool su = on && !prev_on;
        engine.set_var_bounds(instance.var_z_on(t, m), on, on);
        engine.set_var_bounds(instance.var_z_su(t, m), su, su);
      }
    }
    if (engine.solve() != LpStatus::kOptimal) continue;
    const double obj = engine.objective();
    if (obj > best_obj + 1e-15) {
      best_obj = obj;
      best_x = engine.primal_structural();
    }
  }

  MipResult result;
  result.nodes = n_patterns;
  result.leaves_evaluated = n_patterns;
  result.lp_iterations = engine.total_iterations();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (best_x.empty()) {
    result.status = MipStatus::kInfeasible;
    result.gap = std::numeric_limits<double>::infinity();
    return result;
  }
  result.incumbent = extract_schedule(problem, best_x, best_obj);
  result.best_bound = best_obj;
  result.gap = 0.0;
  result.status = MipStatus::kOptimal;
  return result;
}

std::optional<Schedule> warm_start_heuristic(const ScheduleProblem& problem) {
  const int T = problem.horizon();
  const int M = problem.n_modules();
  const ElectrolyzerSpec& spec = problem.fleet.spec;
  const double c_max = spec.c_max_mw;
  const double c_min = spec.c_min_mw();
  const double ramp = spec.ramp_mw();
  const double c_su = spec.startup_energy_mwh();

  for (int m = 0; m < M; ++m) {
    if (problem.fleet.initial_on[m] || problem.fleet.initial_power_mw[m] > 0) {
      return std::nullopt;  // greedy rules only cover a cold plant
    }
  }

  auto sell_only_grid = [&](int t, double consumed) {
    const double price = problem.market.records[t].cleared_price;
    if (price <= 0.0) return 0.0;
    return std::max(0.0, std::min(problem.export_limit_mw[t],
                                  problem.availability_mw[t] - consumed));
  };

  Schedule best;
  double best_obj = kNegInf;

  auto consider = [&](const Schedule& s) {
    if (!verify_schedule(problem, s).feasible(1e-6)) return;
    if (s.objective_value_usd > best_obj) {
      best_obj = s.objective_value_usd;
      best = s;
    }
  };

  auto finish = [&](Schedule& s) {
    double obj = 0.0;
    for (int t = 0; t < T; ++t) {
      obj += problem.market.records[t].cleared_price * s.p_grid_mw[t];
      for (int m = 0; m < M; ++m) {
        obj += spec.hydrogen_price_usd_per_kg * s.h_kg[t * M + m];
      }
    }
    s.objective_value_usd = obj;
  };

  auto blank = [&]() {
    Schedule s;
    s.horizon = T;
    s.n_modules = M;
    s.p_grid_mw.assign(T, 0.0);
    s.p_e_mw.assign(T * M, 0.0);
    s.h_kg.assign(T * M, 0.0);
    s.p_su_mwh.assign(T * M, 0.0);
    s.z_on.assign(T * M, 0);
    s.z_su.assign(T * M, 0);
    return s;
  };

  // Sell-only fallback; feasible for any cold start.
  {
    Schedule s = blank();
    for (int t = 0; t < T; ++t) s.p_grid_mw[t] = sell_only_grid(t, 0.0);
    finish(s);
    consider(s);
  }

  // k modules on for the whole horizon after a synchronized hour-0 startup.
  for (int k = M; k >= 1; --k) {
    if (T < 2) break;
    if (problem.availability_mw[0] < k * c_su) continue;

    std::vector<double> target(T, 0.0);
    bool ok = true;
    for (int t = 1; t < T; ++t) {
      const double share = problem.availability_mw[t] / k;
      double cap = std::min(c_max, share);
      if (cap < c_min) {
        ok = false;
        break;
      }
      const double price = problem.market.records[t].cleared_price;
      const double h_value =
          spec.hydrogen_price_usd_per_kg * efficiency(problem.pwl, cap, c_max);
      target[t] = h_value >= price ? cap : c_min;
    }
    if (!ok) continue;

    // Ramp smoothing: climb from the startup hour, then relax descents.
    std::vector<double> p(T, 0.0);
    for (int t = 1; t < T; ++t) p[t] = std::min(target[t], p[t - 1] + ramp);
    for (int t = T - 2; t >= 1; --t) p[t] = std::min(p[t], p[t + 1] + ramp);
    for (int t = 1; t < T; ++t) {
      if (p[t] < c_min) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    Schedule s = blank();
    for (int t = 0; t < T; ++t) {
      double consumed = 0.0;
      for (int m = 0; m < k; ++m) {
        const int idx = t * M + m;
        s.z_on[idx] = 1;
        if (t == 0) {
          s.z_su[idx] = 1;
          s.p_su_mwh[idx] = c_su;
          consumed += c_su;
        } else {
          s.p_e_mw[idx] = p[t];
          s.h_kg[idx] = eval_pwl(problem.pwl, p[t], c_max);
          consumed += p[t];
        }
      }
      s.p_grid_mw[t] = sell_only_grid(t, consumed);
    }
    finish(s);
    consider(s);
    break;  // largest supportable fleet is the greedy choice
  }

  if (best_obj == kNegInf) return std::nullopt;
  return best;
}

}  // namespace h2sched
