// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/recovery.hpp"

#include <algorithm>
#include <cmath>

namespace quadrelax {

namespace {

double merit(const MiqcqpInstance& inst, const std::vector<double>& x,
             const std::vector<double>& y, double rho) {
  double m = inst.objective.evaluate(x, y);
  for (const auto& g : inst.constraints) {
    const double v = std::max(0.0, g.evaluate(x, y));
    m += rho * v * v;
  }
  return m;
}

// 1-D minimization over [lo, hi]: coarse grid then golden-section refinement
// around the best bracket. The merit is piecewise quartic in one coordinate,
// so a unimodal line search alone is not reliable.
double minimize_coordinate(const MiqcqpInstance& inst, std::vector<double>& x,
                           const std::vector<double>& y, int i, double rho) {
  const double lo = inst.bounds[i].lo;
  const double hi = inst.bounds[i].hi;
  const int grid = 32;
  double best_v = lo;
  double best_m = std::numeric_limits<double>::infinity();
  for (int t = 0; t <= grid; ++t) {
    x[i] = lo + (hi - lo) * t / grid;
    const double m = merit(inst, x, y, rho);
    if (m < best_m) {
      best_m = m;
      best_v = x[i];
    }
  }
  double a = std::max(lo, best_v - (hi - lo) / grid);
  double b = std::min(hi, best_v + (hi - lo) / grid);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  x[i] = c;
  double fc = merit(inst, x, y, rho);
  x[i] = d;
  double fd = merit(inst, x, y, rho);
  for (int it = 0; it < 40; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      x[i] = c;
      fc = merit(inst, x, y, rho);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      x[i] = d;
      fd = merit(inst, x, y, rho);
    }
  }
  const double mid = 0.5 * (a + b);
  x[i] = mid;
  const double fm = merit(inst, x, y, rho);
  if (best_m < fm) {
    x[i] = best_v;
    return best_m;
  }
  return fm;
}

}  // namespace

RecoveryResult primal_recovery(const MiqcqpInstance& inst, const std::vector<double>& x_start,
                               const std::vector<double>& y_start) {
  RecoveryResult best;
  std::vector<double> x = x_start;
  for (int i = 0; i < inst.n; ++i)
    x[i] = std::clamp(x[i], inst.bounds[i].lo, inst.bounds[i].hi);
  std::vector<double> y(inst.k);
  for (int j = 0; j < inst.k; ++j) y[j] = y_start[j] >= 0.5 ? 1.0 : 0.0;

  auto record = [&](const std::vector<double>& cand) {
    const double viol = inst.max_constraint_violation(cand, y);
    const double obj = inst.objective.evaluate(cand, y);
    const bool feas = viol <= 1e-6;
    const bool better = best.x.empty() || (feas && !best.feasible) ||
                        (feas == best.feasible && (feas ? obj < best.objective
                                                        : viol < best.max_violation));
    if (better) {
      best.x = cand;
      best.y = y;
      best.objective = obj;
      best.max_violation = viol;
      best.feasible = feas;
    }
  };
  record(x);

  double rho = 1.0;
  for (int sweep = 0; sweep < 20; ++sweep) {
    for (int i = 0; i < inst.n; ++i) minimize_coordinate(inst, x, y, i, rho);
    record(x);
    rho *= 2.0;
  }
  return best;
}

double compute_gap(double primal, double dual) {
  return std::abs(primal - dual) / std::max(std::abs(primal), 1e-10);
}

}  // namespace quadrelax
