#include "h2sched/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace h2sched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArtificialBound = 1e10;
constexpr double kEtaDropTol = 1e-13;
constexpr int kRefactorPeriod = 64;
constexpr long kIterationLimit = 4'000'000;

enum : signed char { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

}  // namespace

struct SimplexSolver::Impl {
  // --- problem data -------------------------------------------------------
  int n = 0;                         // structural variables
  std::vector<double> cost;          // structural objective (maximize)
  std::vector<double> orig_lo, orig_hi;
  std::vector<char> artificial_lo, artificial_hi;

  struct RowData {
    double lo, hi;
    int begin, end;    // slice of row_var/row_coef
    bool absorbed;     // single-variable row folded into a bound
    int group;         // activation group: one activation per group per scan
  };
  std::vector<RowData> rows;
  std::vector<int> row_var;
  std::vector<double> row_coef;

  // --- active row set -----------------------------------------------------
  std::vector<int> active_rows;              // row id per active position
  std::vector<int> active_pos;               // row id -> position or -1
  std::vector<std::vector<std::pair<int, double>>> cols;  // structural cols
                                                          // over active rows

  // --- simplex state ------------------------------------------------------
  // variables: 0..n-1 structural, n + k = slack of active position k
  std::vector<double> lo, hi;
  std::vector<signed char> status;
  std::vector<double> value;
  std::vector<double> dual;
  std::vector<int> basic_var;      // per active position
  std::vector<int> basis_pos;      // var -> basis position or -1
  Eigen::VectorXd x_basic;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool lu_valid = false;
  bool primal_stale = true;
  bool dual_stale = true;
  bool was_clean = false;
  struct Eta {
    int r;
    double pivot;
    std::vector<std::pair<int, double>> other;
  };
  std::vector<Eta> etas;

  long iterations = 0;
  int degenerate_run = 0;
  bool bland = false;

  // scratch
  std::vector<std::pair<int, double>> alpha_scratch;

  // --- setup --------------------------------------------------------------
  void build(const MilpInstance& instance);
  void tighten_bounds();
  void absorb_single_variable_rows();
  void finalize_boxes();

  int m() const { return static_cast<int>(active_rows.size()); }

  double row_activity(int row) const {
    double v = 0.0;
    for (int e = rows[row].begin; e < rows[row].end; ++e) {
      v += row_coef[e] * value[row_var[e]];
    }
    return v;
  }

  // --- factorization ------------------------------------------------------
  void refactor();
  void reset_to_slack_basis();
  Eigen::VectorXd ftran(Eigen::VectorXd v);
  Eigen::VectorXd btran(Eigen::VectorXd v);

  void recompute_primal();
  void recompute_duals();
  void ensure_clean_state();

  // --- dual simplex -------------------------------------------------------
  struct Leaving {
    int pos = -1;
    int direction = 0;  // +1: above upper, -1: below lower
  };
  Leaving pick_leaving() const;
  enum class PivotOutcome { kPivoted, kNoEntering, kUnstable };
  struct PivotResult {
    PivotOutcome outcome;
    int entering = -1;
  };
  PivotResult dual_pivot(const Leaving& leave, const std::vector<int>& banned);
  bool dual_loop(LpStatus* failure);

  int scan_and_activate();
  void activate_row(int row);
  void repair_nonbasic();
};

void SimplexSolver::Impl::build(const MilpInstance& instance) {
  n = instance.n_vars();
  cost = instance.objective;
  orig_lo = instance.var_lower;
  orig_hi = instance.var_upper;
  artificial_lo.assign(n, 0);
  artificial_hi.assign(n, 0);

  rows.reserve(instance.rows.size());
  for (const MilpRow& row : instance.rows) {
    RowData rd;
    rd.lo = row.lower;
    rd.hi = row.upper;
    rd.begin = static_cast<int>(row_var.size());
    for (const auto& [var, coef] : row.coeffs) {
      if (coef != 0.0) {
        row_var.push_back(var);
        row_coef.push_back(coef);
      }
    }
    rd.end = static_cast<int>(row_var.size());
    rd.absorbed = false;
    // Hydrogen envelope rows of one (t, m) pair compete for the same
    // binding segment; activating them one per scan keeps the working set
    // near-minimal.
    rd.group = (row.family == RowFamily::kHydrogenCurve)
                   ? row.t * instance.n_modules() + row.m
                   : -1;
    rows.push_back(rd);
  }

  absorb_single_variable_rows();
  tighten_bounds();
  finalize_boxes();

  active_pos.assign(rows.size(), -1);
  cols.assign(n, {});

  lo = orig_lo;
  hi = orig_hi;
  value.assign(n, 0.0);
  status.assign(n, kAtLower);
  dual = cost;
  basis_pos.assign(n, -1);
  for (int j = 0; j < n; ++j) {
    if (cost[j] > kDualTol && std::isfinite(hi[j])) {
      status[j] = kAtUpper;
      value[j] = hi[j];
    } else {
      status[j] = kAtLower;
      value[j] = lo[j];
    }
  }
  primal_stale = false;
  dual_stale = false;
  lu_valid = false;
}

void SimplexSolver::Impl::absorb_single_variable_rows() {
  for (RowData& rd : rows) {
    if (rd.end - rd.begin != 1) continue;
    const int var = row_var[rd.begin];
    const double a = row_coef[rd.begin];
    double lo_b = rd.lo / a;
    double hi_b = rd.hi / a;
    if (a < 0.0) std::swap(lo_b, hi_b);
    if (std::isfinite(lo_b)) orig_lo[var] = std::max(orig_lo[var], lo_b);
    if (std::isfinite(hi_b)) orig_hi[var] = std::min(orig_hi[var], hi_b);
    rd.absorbed = true;
  }
}

void SimplexSolver::Impl::tighten_bounds() {
  // Interval propagation over the rows. Derived bounds are relaxed by a hair
  // so rounding can never cut the true feasible set; they only have to be
  // finite, not sharp.
  const double slack = 1e-9;
  for (int pass = 0; pass < 3; ++pass) {
    for (const RowData& rd : rows) {
      if (rd.absorbed) continue;
      double min_act = 0.0;
      int n_unbounded = 0;
      for (int e = rd.begin; e < rd.end; ++e) {
        const int var = row_var[e];
        const double a = row_coef[e];
        const double contrib = a > 0.0 ? a * orig_lo[var] : a * orig_hi[var];
        if (std::isfinite(contrib)) {
          min_act += contrib;
        } else {
          ++n_unbounded;
        }
      }
      if (!std::isfinite(rd.hi) || n_unbounded > 1) continue;
      for (int e = rd.begin; e < rd.end; ++e) {
        const int var = row_var[e];
        const double a = row_coef[e];
        const double own = a > 0.0 ? a * orig_lo[var] : a * orig_hi[var];
        double rest = min_act;
        if (std::isfinite(own)) {
          rest -= own;
        } else if (n_unbounded != 1) {
          continue;  // another variable is unbounded; no implication
        }
        if (n_unbounded == 1 && std::isfinite(own)) continue;
        const double budget = rd.hi - rest;
        if (a > 0.0) {
          const double nb = budget / a + slack;
          if (nb < orig_hi[var]) orig_hi[var] = nb;
        } else {
          const double nb = budget / a - slack;
          if (nb > orig_lo[var]) orig_lo[var] = nb;
        }
      }
    }
  }
}

void SimplexSolver::Impl::finalize_boxes() {
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(orig_hi[j])) {
      orig_hi[j] = kArtificialBound;
      artificial_hi[j] = 1;
    }
    if (!std::isfinite(orig_lo[j])) {
      orig_lo[j] = -kArtificialBound;
      artificial_lo[j] = 1;
    }
  }
}

void SimplexSolver::Impl::refactor() {
  const int dim = m();
  etas.clear();
  if (dim == 0) {
    lu_valid = true;
    return;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * 3);
  for (int k = 0; k < dim; ++k) {
    const int var = basic_var[k];
    if (var < n) {
      for (const auto& [pos, coef] : cols[var]) {
        triplets.emplace_back(pos, k, coef);
      }
    } else {
      triplets.emplace_back(var - n, k, -1.0);
    }
  }
  Eigen::SparseMatrix<double> basis(dim, dim);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  lu.compute(basis);
  if (lu.info() != Eigen::Success) {
    reset_to_slack_basis();
    triplets.clear();
    for (int k = 0; k < dim; ++k) triplets.emplace_back(k, k, -1.0);
    basis.setZero();
    basis.setFromTriplets(triplets.begin(), triplets.end());
    lu.compute(basis);
    if (lu.info() != Eigen::Success) {
      throw std::runtime_error("slack basis factorization failed");
    }
  }
  lu_valid = true;
}

void SimplexSolver::Impl::reset_to_slack_basis() {
  for (int k = 0; k < m(); ++k) {
    const int var = basic_var[k];
    if (var < n) {
      basis_pos[var] = -1;
      // park the displaced structural at its nearest finite bound
      const double mid_lo = std::abs(value[var] - lo[var]);
      const double mid_hi = std::abs(hi[var] - value[var]);
      if (mid_lo <= mid_hi) {
        status[var] = kAtLower;
        value[var] = lo[var];
      } else {
        status[var] = kAtUpper;
        value[var] = hi[var];
      }
    } else {
      basis_pos[var] = -1;
    }
  }
  for (int k = 0; k < m(); ++k) {
    const int slack = n + k;
    basic_var[k] = slack;
    basis_pos[slack] = k;
    status[slack] = kBasic;
  }
  primal_stale = true;
  dual_stale = true;
  was_clean = false;
}

Eigen::VectorXd SimplexSolver::Impl::ftran(Eigen::VectorXd v) {
  if (m() > 0) v = lu.solve(v);
  for (const Eta& eta : etas) {
    const double t = v[eta.r] / eta.pivot;
    if (t != 0.0) {
      for (const auto& [i, w] : eta.other) v[i] -= w * t;
    }
    v[eta.r] = t;
  }
  return v;
}

Eigen::VectorXd SimplexSolver::Impl::btran(Eigen::VectorXd v) {
  for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
    double s = v[it->r];
    for (const auto& [i, w] : it->other) s -= w * v[i];
    v[it->r] = s / it->pivot;
  }
  if (m() > 0) v = lu.transpose().solve(v);
  return v;
}

void SimplexSolver::Impl::recompute_primal() {
  const int dim = m();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < n; ++j) {
    if (status[j] == kBasic || value[j] == 0.0) continue;
    for (const auto& [pos, coef] : cols[j]) rhs[pos] -= coef * value[j];
  }
  for (int k = 0; k < dim; ++k) {
    const int slack = n + k;
    if (status[slack] != kBasic && value[slack] != 0.0) rhs[k] += value[slack];
  }
  x_basic = ftran(std::move(rhs));
  for (int k = 0; k < dim; ++k) value[basic_var[k]] = x_basic[k];
  primal_stale = false;
}

void SimplexSolver::Impl::recompute_duals() {
  const int dim = m();
  Eigen::VectorXd cb(dim);
  for (int k = 0; k < dim; ++k) {
    const int var = basic_var[k];
    cb[k] = var < n ? cost[var] : 0.0;
  }
  const Eigen::VectorXd y = btran(std::move(cb));
  dual.assign(n + dim, 0.0);
  for (int j = 0; j < n; ++j) {
    if (status[j] == kBasic) continue;
    double d = cost[j];
    for (const auto& [pos, coef] : cols[j]) d -= coef * y[pos];
    dual[j] = d;
  }
  for (int k = 0; k < dim; ++k) {
    const int slack = n + k;
    if (status[slack] != kBasic) dual[slack] = y[k];
  }
  dual_stale = false;
}

void SimplexSolver::Impl::ensure_clean_state() {
  if (!lu_valid) refactor();
  if (primal_stale) recompute_primal();
  if (dual_stale) recompute_duals();
}

SimplexSolver::Impl::Leaving SimplexSolver::Impl::pick_leaving() const {
  Leaving best;
  if (!bland) {
    double worst = kFeasTol;
    for (int k = 0; k < m(); ++k) {
      const int var = basic_var[k];
      const double v = x_basic[k];
      const double below = lo[var] - v;
      const double above = v - hi[var];
      if (below > worst) {
        worst = below;
        best.pos = k;
        best.direction = -1;
      }
      if (above > worst) {
        worst = above;
        best.pos = k;
        best.direction = +1;
      }
    }
    return best;
  }
  // Bland mode: lowest variable index among the violated basics.
  int best_var = std::numeric_limits<int>::max();
  for (int k = 0; k < m(); ++k) {
    const int var = basic_var[k];
    const double v = x_basic[k];
    int dir = 0;
    if (lo[var] - v > kFeasTol) dir = -1;
    if (v - hi[var] > kFeasTol) dir = +1;
    if (dir != 0 && var < best_var) {
      best_var = var;
      best.pos = k;
      best.direction = dir;
    }
  }
  return best;
}

SimplexSolver::Impl::PivotResult SimplexSolver::Impl::dual_pivot(
    const Leaving& leave, const std::vector<int>& banned) {
  const int dim = m();
  const int r = leave.pos;
  const int sigma = leave.direction;
  const int leaving_var = basic_var[r];

  Eigen::VectorXd e_r = Eigen::VectorXd::Zero(dim);
  e_r[r] = 1.0;
  const Eigen::VectorXd rho = btran(std::move(e_r));

  // Collect alpha = rho . column for every nonbasic variable; pick the
  // entering variable by the dual ratio test (Bland: lowest eligible index).
  alpha_scratch.clear();
  int entering = -1;
  double entering_alpha = 0.0;
  double best_ratio = kInf;
  auto consider = [&](int j, double alpha) {
    if (std::abs(alpha) <= kPivotTol) return;
    alpha_scratch.emplace_back(j, alpha);
    if (lo[j] == hi[j]) return;
    if (std::binary_search(banned.begin(), banned.end(), j)) return;
    const double salpha = sigma * alpha;
    bool eligible = false;
    double numer = 0.0;
    if (status[j] == kAtLower && salpha > kPivotTol) {
      eligible = true;
      numer = std::min(dual[j], 0.0);
    } else if (status[j] == kAtUpper && salpha < -kPivotTol) {
      eligible = true;
      numer = std::max(dual[j], 0.0);
    }
    if (!eligible) return;
    if (bland) {
      if (entering == -1 || j < entering) {
        entering = j;
        entering_alpha = alpha;
      }
      return;
    }
    const double ratio = std::abs(numer) / std::abs(alpha);
    if (ratio < best_ratio - 1e-12 ||
        (ratio < best_ratio + 1e-12 && (entering == -1 || j < entering))) {
      best_ratio = ratio;
      entering = j;
      entering_alpha = alpha;
    }
  };

  for (int j = 0; j < n; ++j) {
    if (status[j] == kBasic) continue;
    double alpha = 0.0;
    for (const auto& [pos, coef] : cols[j]) alpha += coef * rho[pos];
    consider(j, alpha);
  }
  for (int k = 0; k < dim; ++k) {
    const int slack = n + k;
    if (status[slack] == kBasic) continue;
    consider(slack, -rho[k]);
  }

  if (entering == -1) return {PivotOutcome::kNoEntering, -1};

  // Column of the entering variable through the current basis.
  Eigen::VectorXd col = Eigen::VectorXd::Zero(dim);
  if (entering < n) {
    for (const auto& [pos, coef] : cols[entering]) col[pos] += coef;
  } else {
    col[entering - n] = -1.0;
  }
  Eigen::VectorXd w = ftran(std::move(col));
  const double pivot = w[r];
  if (std::abs(pivot) < 0.5 * kPivotTol ||
      std::abs(pivot - entering_alpha) >
          1e-6 * std::max(1.0, std::abs(entering_alpha))) {
    return {PivotOutcome::kUnstable, entering};
  }

  const double bound = sigma > 0 ? hi[leaving_var] : lo[leaving_var];
  const double delta = (x_basic[r] - bound) / pivot;
  const double theta = dual[entering] / pivot;

  for (int k = 0; k < dim; ++k) {
    const double wk = w[k];
    if (wk != 0.0) x_basic[k] -= delta * wk;
  }
  x_basic[r] = value[entering] + delta;

  for (const auto& [j, alpha] : alpha_scratch) {
    if (j != entering) dual[j] -= theta * alpha;
  }
  dual[leaving_var] = -theta;
  dual[entering] = 0.0;

  value[entering] += delta;
  value[leaving_var] = bound;
  status[leaving_var] = sigma > 0 ? kAtUpper : kAtLower;
  status[entering] = kBasic;
  basis_pos[leaving_var] = -1;
  basis_pos[entering] = r;
  basic_var[r] = entering;
  for (int k = 0; k < dim; ++k) value[basic_var[k]] = x_basic[k];

  Eta eta;
  eta.r = r;
  eta.pivot = pivot;
  for (int k = 0; k < dim; ++k) {
    if (k != r && std::abs(w[k]) > kEtaDropTol) eta.other.emplace_back(k, w[k]);
  }
  etas.push_back(std::move(eta));

  ++iterations;
  if (std::abs(theta) <= 1e-12) {
    if (++degenerate_run >= kBlandTrigger) bland = true;
  } else {
    degenerate_run = 0;
    bland = false;
  }
  was_clean = false;
  return {PivotOutcome::kPivoted, entering};
}

// Runs dual pivots until the active working set is primal feasible.
// Returns false (with *failure set) on proven infeasibility.
bool SimplexSolver::Impl::dual_loop(LpStatus* failure) {
  std::vector<int> banned;
  int stalls = 0;
  while (true) {
    if (iterations > kIterationLimit) {
      throw std::runtime_error("simplex iteration limit exceeded");
    }
    const Leaving leave = pick_leaving();
    if (leave.pos < 0) return true;
    const PivotResult result = dual_pivot(leave, banned);
    if (result.outcome == PivotOutcome::kPivoted) {
      banned.clear();
      stalls = 0;
      if (static_cast<int>(etas.size()) >= kRefactorPeriod) {
        refactor();
        recompute_primal();
        recompute_duals();
      }
      continue;
    }
    if (result.outcome == PivotOutcome::kUnstable) {
      // Retry from a fresh factorization; a candidate that stays unstable on
      // a clean basis is excluded from the ratio test.
      if (!etas.empty()) {
        refactor();
        recompute_primal();
        recompute_duals();
      } else {
        banned.insert(
            std::lower_bound(banned.begin(), banned.end(), result.entering),
            result.entering);
      }
      if (++stalls > 64) {
        throw std::runtime_error("simplex stalled on unstable pivots");
      }
      continue;
    }
    // No entering column: dual unbounded, i.e. primal infeasible. Confirm on
    // a clean factorization before giving up.
    if ((!etas.empty() || !banned.empty()) && stalls <= 64) {
      ++stalls;
      refactor();
      recompute_primal();
      recompute_duals();
      banned.clear();
      continue;
    }
    *failure = LpStatus::kInfeasible;
    return false;
  }
}

int SimplexSolver::Impl::scan_and_activate() {
  struct Candidate {
    double violation;
    int row;
    int group;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const RowData& rd = rows[i];
    if (rd.absorbed || active_pos[i] >= 0) continue;
    const double act = row_activity(i);
    const double viol = std::max(act - rd.hi, rd.lo - act);
    if (viol > kFeasTol) candidates.push_back({viol, i, rd.group});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.violation != b.violation) return a.violation > b.violation;
              return a.row < b.row;
            });
  std::vector<char> group_seen;
  int activated = 0;
  for (const Candidate& c : candidates) {
    if (c.group >= 0) {
      if (group_seen.size() <= static_cast<std::size_t>(c.group)) {
        group_seen.resize(c.group + 1, 0);
      }
      if (group_seen[c.group]) continue;
      group_seen[c.group] = 1;
    }
    activate_row(c.row);
    ++activated;
  }
  return activated;
}

void SimplexSolver::Impl::activate_row(int row) {
  const int pos = m();
  active_rows.push_back(row);
  active_pos[row] = pos;
  for (int e = rows[row].begin; e < rows[row].end; ++e) {
    cols[row_var[e]].emplace_back(pos, row_coef[e]);
  }
  const int slack = n + pos;
  lo.push_back(rows[row].lo);
  hi.push_back(rows[row].hi);
  status.push_back(kBasic);
  value.push_back(row_activity(row));
  dual.push_back(0.0);
  basic_var.push_back(slack);
  basis_pos.push_back(pos);
  lu_valid = false;
  primal_stale = true;
  dual_stale = true;
  was_clean = false;
}

void SimplexSolver::Impl::repair_nonbasic() {
  for (int j = 0; j < n + m(); ++j) {
    if (status[j] == kBasic) continue;
    if (lo[j] == hi[j]) {
      status[j] = kAtLower;
      value[j] = lo[j];
      continue;
    }
    const double d = dual[j];
    signed char side = status[j];
    if (d > kDualTol) {
      side = kAtUpper;
    } else if (d < -kDualTol) {
      side = kAtLower;
    }
    if (side == kAtUpper && !std::isfinite(hi[j])) side = kAtLower;
    if (side == kAtLower && !std::isfinite(lo[j])) side = kAtUpper;
    status[j] = side;
    const double target = side == kAtUpper ? hi[j] : lo[j];
    if (value[j] != target) {
      value[j] = target;
      primal_stale = true;
    }
  }
}

SimplexSolver::SimplexSolver(const MilpInstance& instance)
    : impl_(std::make_unique<Impl>()) {
  impl_->build(instance);
}

SimplexSolver::~SimplexSolver() = default;

void SimplexSolver::set_var_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= impl_->n) {
    throw std::out_of_range("variable index out of range");
  }
  impl_->lo[var] = lower;
  impl_->hi[var] = upper;
  if (impl_->status[var] != kBasic) {
    impl_->primal_stale = true;  // nonbasic value may need re-anchoring
  }
  impl_->was_clean = false;
}

void SimplexSolver::reset_var_bounds() {
  for (int j = 0; j < impl_->n; ++j) {
    impl_->lo[j] = impl_->orig_lo[j];
    impl_->hi[j] = impl_->orig_hi[j];
  }
  impl_->primal_stale = true;
  impl_->was_clean = false;
}

double SimplexSolver::working_lower(int var) const { return impl_->lo[var]; }
double SimplexSolver::working_upper(int var) const { return impl_->hi[var]; }

LpStatus SimplexSolver::solve() {
  Impl& s = *impl_;
  for (int j = 0; j < s.n + s.m(); ++j) {
    if (s.lo[j] > s.hi[j] + kFeasTol) return LpStatus::kInfeasible;
  }
  if (!s.lu_valid) s.refactor();
  if (s.dual_stale) s.recompute_duals();
  s.repair_nonbasic();  // needs valid reduced costs to pick sides
  if (s.primal_stale) s.recompute_primal();

  while (true) {
    const long before = s.iterations;
    LpStatus failure = LpStatus::kOptimal;
    if (!s.dual_loop(&failure)) return failure;
    if (s.scan_and_activate() > 0) {
      s.ensure_clean_state();
      continue;
    }
    if (s.iterations != before || !s.was_clean) {
      s.refactor();
      s.recompute_primal();
      s.recompute_duals();
      s.was_clean = true;
      continue;
    }
    break;
  }

  for (int j = 0; j < s.n; ++j) {
    const double v = s.value[j];
    if (s.artificial_hi[j] && s.hi[j] == kArtificialBound &&
        v > kArtificialBound * (1.0 - 1e-6)) {
      return LpStatus::kUnbounded;
    }
    if (s.artificial_lo[j] && s.lo[j] == -kArtificialBound &&
        v < -kArtificialBound * (1.0 - 1e-6)) {
      return LpStatus::kUnbounded;
    }
  }
  return LpStatus::kOptimal;
}

double SimplexSolver::objective() const {
  double obj = 0.0;
  for (int j = 0; j < impl_->n; ++j) obj += impl_->cost[j] * impl_->value[j];
  return obj;
}

double SimplexSolver::primal_value(int var) const {
  return impl_->value[var];
}

std::vector<double> SimplexSolver::primal_structural() const {
  return std::vector<double>(impl_->value.begin(),
                             impl_->value.begin() + impl_->n);
}

long SimplexSolver::total_iterations() const noexcept {
  return impl_->iterations;
}

LpSolution solve_lp(const MilpInstance& instance,
                    const std::vector<std::pair<int, double>>& fixed) {
  SimplexSolver solver(instance);
  for (const auto& [var, value] : fixed) {
    solver.set_var_bounds(var, value, value);
  }
  LpSolution solution;
  solution.status = solver.solve();
  solution.iterations = solver.total_iterations();
  if (solution.status == LpStatus::kOptimal) {
    solution.objective = solver.objective();
    solution.x = solver.primal_structural();
  }
  return solution;
}

double lp_infeasibility(const MilpInstance& instance,
                        const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < instance.n_vars(); ++j) {
    worst = std::max(worst, instance.var_lower[j] - x[j]);
    worst = std::max(worst, x[j] - instance.var_upper[j]);
  }
  for (const MilpRow& row : instance.rows) {
    double act = 0.0;
    for (const auto& [var, coef] : row.coeffs) act += coef * x[var];
    worst = std::max(worst, act - row.upper);
    worst = std::max(worst, row.lower - act);
  }
  return worst;
}

}  // namespace h2sched
