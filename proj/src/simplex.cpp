// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace quadrelax {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kDegenTol = 1e-12;
constexpr long kBlandTrigger = 1000;  // consecutive degenerate pivots
}  // namespace

SimplexSolver::SimplexSolver(const MipModel& model, double feas_tol, double pivot_tol)
    : model_(&model), feas_tol_(feas_tol), pivot_tol_(pivot_tol) {
  n_ = model.num_vars();
  m_ = model.num_rows();
  cols_ = n_ + m_;
  max_iterations_ = 20000 + 200L * (m_ + n_);

  lower_.assign(cols_, 0.0);
  upper_.assign(cols_, 0.0);
  for (int v = 0; v < n_; ++v) {
    lower_[v] = model.var(v).bounds.lo;
    upper_[v] = model.var(v).bounds.hi;
  }
  for (int i = 0; i < m_; ++i) {
    switch (model.row(i).sense) {
      case RowSense::LE: lower_[n_ + i] = 0.0; upper_[n_ + i] = kInf; break;
      case RowSense::GE: lower_[n_ + i] = -kInf; upper_[n_ + i] = 0.0; break;
      case RowSense::EQ: lower_[n_ + i] = 0.0; upper_[n_ + i] = 0.0; break;
    }
  }
  base_lower_ = lower_;
  base_upper_ = upper_;

  cost_.assign(cols_, 0.0);
  set_objective_from_model();
  build_initial_basis();
}

void SimplexSolver::set_var_bounds(VarId v, double lo, double hi) {
  assert(v >= 0 && v < n_);
  lower_[v] = lo;
  upper_[v] = hi;
}

void SimplexSolver::restore_all_bounds() {
  lower_ = base_lower_;
  upper_ = base_upper_;
}

void SimplexSolver::set_objective(const std::vector<std::pair<VarId, double>>& coeffs,
                                  double constant) {
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (const auto& [v, c] : coeffs) cost_[v] += c;
  cost_constant_ = constant;
  if (!tab_.empty()) {
    zrow_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* trow = &tab_[static_cast<size_t>(i) * cols_];
      for (int j = 0; j < cols_; ++j) zrow_[j] -= cb * trow[j];
    }
  }
}

void SimplexSolver::set_objective_from_model() {
  set_objective(model_->objective_terms(), model_->objective_constant());
}

void SimplexSolver::build_initial_basis() {
  tab_.assign(static_cast<size_t>(m_) * cols_, 0.0);
  binv_b_.assign(m_, 0.0);
  basis_.resize(m_);
  row_of_.assign(cols_, -1);
  vstat_.assign(cols_, VStat::AtLower);
  for (int v = 0; v < n_; ++v) {
    vstat_[v] = std::isfinite(lower_[v]) ? VStat::AtLower : VStat::AtUpper;
  }
  for (int i = 0; i < m_; ++i) {
    const Row& r = model_->row(i);
    for (const auto& [v, c] : r.coeffs) tab(i, v) = c;
    tab(i, n_ + i) = 1.0;
    binv_b_[i] = r.rhs;
    basis_[i] = n_ + i;
    row_of_[n_ + i] = i;
    vstat_[n_ + i] = VStat::Basic;
  }
  zrow_ = cost_;
  xb_.assign(m_, 0.0);
}

void SimplexSolver::refactorize() {
  // Gauss-Jordan on [B | A I b] reducing B to the identity.
  const int wcols = m_ + cols_ + 1;
  std::vector<double> w(static_cast<size_t>(m_) * wcols, 0.0);
  auto W = [&](int i, int j) -> double& { return w[static_cast<size_t>(i) * wcols + j]; };
  for (int i = 0; i < m_; ++i) {
    const Row& r = model_->row(i);
    for (const auto& [v, c] : r.coeffs) {
      W(i, m_ + v) = c;
      for (int col = 0; col < m_; ++col) {
        if (basis_[col] == v) W(i, col) = c;
      }
    }
    W(i, m_ + n_ + i) = 1.0;
    for (int col = 0; col < m_; ++col) {
      if (basis_[col] == n_ + i) W(i, col) = 1.0;
    }
    W(i, wcols - 1) = r.rhs;
  }
  for (int col = 0; col < m_; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int i = col; i < m_; ++i) {
      if (std::abs(W(i, col)) > best) {
        best = std::abs(W(i, col));
        piv = i;
      }
    }
    if (piv < 0 || best < 1e-12) throw NumericalFailure("singular basis during refactorization");
    if (piv != col) {
      for (int j = 0; j < wcols; ++j) std::swap(W(piv, j), W(col, j));
    }
    const double inv = 1.0 / W(col, col);
    for (int j = 0; j < wcols; ++j) W(col, j) *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == col) continue;
      const double f = W(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < wcols; ++j) W(i, j) -= f * W(col, j);
    }
  }
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < cols_; ++j) tab(i, j) = W(i, m_ + j);
    binv_b_[i] = W(i, wcols - 1);
    row_of_[basis_[i]] = i;
  }
  zrow_ = cost_;
  for (int i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb == 0.0) continue;
    const double* trow = &tab_[static_cast<size_t>(i) * cols_];
    for (int j = 0; j < cols_; ++j) zrow_[j] -= cb * trow[j];
  }
}

double SimplexSolver::nonbasic_value(int j) const {
  return vstat_[j] == VStat::AtUpper ? upper_[j] : lower_[j];
}

void SimplexSolver::compute_basic_values() {
  xb_ = binv_b_;
  for (int j = 0; j < cols_; ++j) {
    if (vstat_[j] == VStat::Basic) continue;
    const double xj = nonbasic_value(j);
    if (xj == 0.0) continue;
    for (int i = 0; i < m_; ++i) xb_[i] -= tab(i, j) * xj;
  }
}

void SimplexSolver::pivot(int r, int q) {
  const double piv = tab(r, q);
  double* prow = &tab_[static_cast<size_t>(r) * cols_];
  const double inv = 1.0 / piv;
  for (int j = 0; j < cols_; ++j) prow[j] *= inv;
  binv_b_[r] *= inv;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* irow = &tab_[static_cast<size_t>(i) * cols_];
    const double f = irow[q];
    if (f == 0.0) continue;
    for (int j = 0; j < cols_; ++j) irow[j] -= f * prow[j];
    binv_b_[i] -= f * binv_b_[r];
  }
  const double zf = zrow_[q];
  if (zf != 0.0) {
    for (int j = 0; j < cols_; ++j) zrow_[j] -= zf * prow[j];
  }
  const int leaving = basis_[r];
  row_of_[leaving] = -1;
  basis_[r] = q;
  row_of_[q] = r;
  vstat_[q] = VStat::Basic;
  ++total_pivots_;
}

bool SimplexSolver::phase1(long& iters) {
  std::vector<double> w(m_, 0.0);
  while (true) {
    if (iters++ > max_iterations_) throw NumericalFailure("simplex iteration cap hit in phase 1");

    double infeas = 0.0;
    bool any = false;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (xb_[i] < lower_[b] - feas_tol_) {
        w[i] = 1.0;
        infeas += lower_[b] - xb_[i];
        any = true;
      } else if (xb_[i] > upper_[b] + feas_tol_) {
        w[i] = -1.0;
        infeas += xb_[i] - upper_[b];
        any = true;
      } else {
        w[i] = 0.0;
      }
    }
    if (!any) return true;

    // d_j = sum_{viol low} T_ij - sum_{viol high} T_ij, the derivative of the
    // infeasibility sum per unit increase of x_j.
    int enter = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (vstat_[j] == VStat::Basic) continue;
      if (upper_[j] - lower_[j] <= 0.0) continue;
      // d(infeas)/dx_j with dxB_i/dx_j = -T_ij: violated-low rows contribute
      // +T_ij, violated-high rows -T_ij.
      double d = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (w[i] != 0.0) d += w[i] * tab(i, j);
      }
      double score = 0.0;
      int s = 0;
      if (vstat_[j] == VStat::AtLower && d < -kDualTol) {
        score = -d;
        s = 1;
      } else if (vstat_[j] == VStat::AtUpper && d > kDualTol) {
        score = d;
        s = -1;
      } else {
        continue;
      }
      if (bland_) {
        enter = j;
        dir = s;
        best = score;
        break;
      }
      if (score > best) {
        best = score;
        enter = j;
        dir = s;
      }
    }
    if (enter < 0) return false;  // infeasibility cannot decrease

    // Long-step ratio test: walk breakpoints while the infeasibility slope
    // stays negative.
    struct Event {
      double t;
      int row;  // -1 for the entering variable's own bound
      bool at_upper;
      double abs_piv;
    };
    std::vector<Event> events;
    double slope = -best;
    for (int i = 0; i < m_; ++i) {
      const double a = tab(i, enter);
      if (std::abs(a) <= pivot_tol_) continue;
      const double delta = -dir * a;
      const int b = basis_[i];
      const double l = lower_[b], u = upper_[b], v = xb_[i];
      if (delta > 0.0) {
        if (v > u + feas_tol_) continue;  // worsens; already priced in
        if (v < l - feas_tol_) events.push_back({(l - v) / delta, i, false, std::abs(a)});
        if (std::isfinite(u)) events.push_back({(u - v) / delta, i, true, std::abs(a)});
      } else {
        if (v < l - feas_tol_) continue;
        if (v > u + feas_tol_) events.push_back({(u - v) / delta, i, true, std::abs(a)});
        if (std::isfinite(l)) events.push_back({(l - v) / delta, i, false, std::abs(a)});
      }
    }
    const double own_range = upper_[enter] - lower_[enter];
    if (std::isfinite(own_range)) events.push_back({own_range, -1, false, 0.0});
    for (auto& e : events) e.t = std::max(e.t, 0.0);
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
      if (a.t != b.t) return a.t < b.t;
      return a.abs_piv > b.abs_piv;
    });

    double tstar = -1.0;
    int stop_index = -1;
    for (size_t e = 0; e < events.size(); ++e) {
      const double inc = events[e].row < 0 ? kInf : std::abs(tab(events[e].row, enter));
      slope += inc;
      if (slope >= -kDegenTol) {
        tstar = events[e].t;
        stop_index = static_cast<int>(e);
        break;
      }
    }
    if (stop_index < 0) {
      if (events.empty()) throw NumericalFailure("phase 1 found no blocking event");
      stop_index = static_cast<int>(events.size()) - 1;
      tstar = events[stop_index].t;
    }

    // Prefer a numerically solid pivot among events at (almost) the same step.
    int chosen = stop_index;
    for (int e = 0; e <= stop_index; ++e) {
      if (events[e].row < 0) continue;
      if (events[e].t >= tstar - 1e-12) {
        if (chosen < 0 || events[chosen].row < 0 ||
            events[e].abs_piv > events[chosen].abs_piv) {
          chosen = e;
        }
      }
    }

    for (int i = 0; i < m_; ++i) xb_[i] -= dir * tab(i, enter) * tstar;
    degenerate_streak_ = tstar <= kDegenTol ? degenerate_streak_ + 1 : 0;
    if (degenerate_streak_ > kBlandTrigger) bland_ = true;

    const Event& ev = events[chosen];
    if (ev.row < 0) {
      vstat_[enter] = vstat_[enter] == VStat::AtLower ? VStat::AtUpper : VStat::AtLower;
      continue;
    }
    const double enter_val = nonbasic_value(enter) + dir * tstar;
    const int leaving = basis_[ev.row];
    pivot(ev.row, enter);
    vstat_[leaving] = ev.at_upper ? VStat::AtUpper : VStat::AtLower;
    xb_[ev.row] = enter_val;
  }
}

LpStatus SimplexSolver::phase2(long& iters) {
  while (true) {
    if (iters++ > max_iterations_) return LpStatus::Stalled;

    int enter = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (vstat_[j] == VStat::Basic) continue;
      if (upper_[j] - lower_[j] <= 0.0) continue;
      const double z = zrow_[j];
      double score = 0.0;
      int s = 0;
      if (vstat_[j] == VStat::AtLower && z < -kDualTol) {
        score = -z;
        s = 1;
      } else if (vstat_[j] == VStat::AtUpper && z > kDualTol) {
        score = z;
        s = -1;
      } else {
        continue;
      }
      if (bland_) {
        enter = j;
        dir = s;
        best = score;
        break;
      }
      if (score > best) {
        best = score;
        enter = j;
        dir = s;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    // Harris-style two-pass ratio test.
    const double own_range = upper_[enter] - lower_[enter];
    double t_relax = own_range;
    for (int i = 0; i < m_; ++i) {
      const double a = tab(i, enter);
      if (std::abs(a) <= pivot_tol_) continue;
      const double delta = -dir * a;
      const int b = basis_[i];
      if (delta > 0.0 && std::isfinite(upper_[b])) {
        t_relax = std::min(t_relax, std::max(0.0, (upper_[b] - xb_[i] + feas_tol_) / delta));
      } else if (delta < 0.0 && std::isfinite(lower_[b])) {
        t_relax = std::min(t_relax, std::max(0.0, (lower_[b] - xb_[i] - feas_tol_) / delta));
      }
    }
    if (!std::isfinite(t_relax)) return LpStatus::Unbounded;

    int leave_row = -1;
    double tstar = own_range;
    double best_piv = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = tab(i, enter);
      if (std::abs(a) <= pivot_tol_) continue;
      const double delta = -dir * a;
      const int b = basis_[i];
      double t_exact;
      if (delta > 0.0 && std::isfinite(upper_[b])) {
        t_exact = std::max(0.0, (upper_[b] - xb_[i]) / delta);
      } else if (delta < 0.0 && std::isfinite(lower_[b])) {
        t_exact = std::max(0.0, (lower_[b] - xb_[i]) / delta);
      } else {
        continue;
      }
      if (t_exact > t_relax) continue;
      bool take;
      if (bland_) {
        take = leave_row < 0 || t_exact < tstar - kDegenTol ||
               (t_exact <= tstar + kDegenTol && basis_[i] < basis_[leave_row]);
      } else {
        take = leave_row < 0 || std::abs(a) > best_piv;
      }
      if (take) {
        leave_row = i;
        tstar = t_exact;
        best_piv = std::abs(a);
      }
    }

    if (leave_row < 0) {
      if (!std::isfinite(own_range)) return LpStatus::Unbounded;
      // Bound flip.
      for (int i = 0; i < m_; ++i) xb_[i] -= dir * tab(i, enter) * own_range;
      vstat_[enter] = vstat_[enter] == VStat::AtLower ? VStat::AtUpper : VStat::AtLower;
      degenerate_streak_ = own_range <= kDegenTol ? degenerate_streak_ + 1 : 0;
      continue;
    }

    const double a_leave = tab(leave_row, enter);
    const double delta_leave = -dir * a_leave;
    const bool leave_at_upper = delta_leave > 0.0;
    const double enter_val = nonbasic_value(enter) + dir * tstar;
    for (int i = 0; i < m_; ++i) xb_[i] -= dir * tab(i, enter) * tstar;
    const int leaving = basis_[leave_row];
    pivot(leave_row, enter);
    vstat_[leaving] = leave_at_upper ? VStat::AtUpper : VStat::AtLower;
    xb_[leave_row] = enter_val;

    degenerate_streak_ = tstar <= kDegenTol ? degenerate_streak_ + 1 : 0;
    if (degenerate_streak_ > kBlandTrigger) bland_ = true;
  }
}

double SimplexSolver::residual_inf_norm() const {
  double worst = 0.0;
  std::vector<double> x(n_);
  for (int v = 0; v < n_; ++v) {
    x[v] = vstat_[v] == VStat::Basic ? xb_[row_of_[v]] : nonbasic_value(v);
  }
  for (int i = 0; i < m_; ++i) {
    double act = 0.0;
    for (const auto& [v, c] : model_->row(i).coeffs) act += c * x[v];
    const double s = vstat_[n_ + i] == VStat::Basic ? xb_[row_of_[n_ + i]]
                                                    : nonbasic_value(n_ + i);
    worst = std::max(worst, std::abs(act + s - model_->row(i).rhs));
  }
  return worst;
}

LpResult SimplexSolver::solve() {
  LpResult res;
  long iters = 0;
  bland_ = false;
  degenerate_streak_ = 0;

  for (int attempt = 0;; ++attempt) {
    compute_basic_values();
    LpStatus status;
    try {
      if (!phase1(iters)) {
        status = LpStatus::Infeasible;
      } else {
        status = phase2(iters);
      }
    } catch (const NumericalFailure&) {
      if (attempt >= 1) throw;
      build_initial_basis();
      bland_ = true;
      iters = 0;
      continue;
    }

    if (status == LpStatus::Optimal && residual_inf_norm() > 10.0 * feas_tol_ && attempt < 1) {
      refactorize();
      iters = 0;
      continue;
    }
    if (status == LpStatus::Stalled && attempt < 1) {
      refactorize();
      bland_ = true;
      iters = 0;
      continue;
    }

    res.status = status;
    res.iterations = iters;
    res.values.resize(n_);
    for (int v = 0; v < n_; ++v) {
      res.values[v] = vstat_[v] == VStat::Basic ? xb_[row_of_[v]] : nonbasic_value(v);
    }
    double obj = cost_constant_;
    for (int v = 0; v < n_; ++v) obj += cost_[v] * res.values[v];
    res.objective = obj;
    return res;
  }
}

Solution solve_lp(const MipModel& model, const SolveLimits& limits) {
  limits.validate();
  model.validate();
  SimplexSolver solver(model, limits.feas_tol, limits.lp_pivot_tol);
  LpResult lp = solver.solve();
  Solution sol;
  switch (lp.status) {
    case LpStatus::Optimal: sol.status = SolveStatus::Optimal; break;
    case LpStatus::Infeasible: sol.status = SolveStatus::Infeasible; break;
    case LpStatus::Unbounded: sol.status = SolveStatus::Unbounded; break;
    case LpStatus::Stalled: throw NumericalFailure("LP pivoting stalled beyond iteration cap");
  }
  if (lp.status == LpStatus::Optimal) {
    sol.values = std::move(lp.values);
    sol.objective_value = lp.objective;
  }
  return sol;
}

}  // namespace quadrelax
