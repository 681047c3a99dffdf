// SPDX-License-Identifier: Apache-2.0
// Test-only oracles, independent of the solver implementation paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "quadrelax/model.hpp"

namespace quadrelax::testing {

// Dense brute-force LP oracle: enumerates candidate vertices (every choice of
// n tight constraints among rows-at-equality and variable bounds), solves the
// n x n system by Gaussian elimination and keeps the best feasible point.
// Requires every variable bounded. Returns nullopt when no feasible vertex
// exists (infeasible for bounded polyhedra).
inline std::optional<double> lp_vertex_enumeration(const MipModel& m, double feas_tol = 1e-7) {
  const int n = m.num_vars();
  struct Constraint {
    std::vector<double> a;
    double b;
  };
  std::vector<Constraint> cons;
  for (int v = 0; v < n; ++v) {
    std::vector<double> row(n, 0.0);
    row[v] = 1.0;
    cons.push_back({row, m.var(v).bounds.lo});
    if (m.var(v).bounds.hi != m.var(v).bounds.lo) cons.push_back({row, m.var(v).bounds.hi});
  }
  for (int i = 0; i < m.num_rows(); ++i) {
    std::vector<double> row(n, 0.0);
    for (const auto& [v, c] : m.row(i).coeffs) row[v] += c;
    cons.push_back({row, m.row(i).rhs});
  }

  const int total = static_cast<int>(cons.size());
  std::vector<int> pick(n);
  std::optional<double> best;
  std::vector<double> best_x;

  std::vector<int> idx(n, 0);
  // Iterative combination enumeration.
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (total < n) return std::nullopt;
  while (true) {
    // Solve the tight system.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a[r][c] = cons[idx[r]].a[c];
      a[r][n] = cons[idx[r]].b;
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = -1;
      double bestp = 1e-10;
      for (int r = col; r < n; ++r) {
        if (std::abs(a[r][col]) > bestp) {
          bestp = std::abs(a[r][col]);
          piv = r;
        }
      }
      if (piv < 0) {
        singular = true;
        break;
      }
      std::swap(a[piv], a[col]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        if (f == 0.0) continue;
        for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
      }
    }
    if (!singular) {
      std::vector<double> x(n);
      for (int r = 0; r < n; ++r) x[r] = a[r][n] / a[r][r];
      bool feasible = true;
      for (int v = 0; v < n && feasible; ++v) {
        feasible = x[v] >= m.var(v).bounds.lo - feas_tol && x[v] <= m.var(v).bounds.hi + feas_tol;
      }
      for (int i = 0; i < m.num_rows() && feasible; ++i) {
        feasible = m.row_violation(i, x) <= feas_tol;
      }
      if (feasible) {
        const double obj = m.objective_value(x);
        if (!best || obj < *best) {
          best = obj;
          best_x = x;
        }
      }
    }

    // Next combination.
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == total - n + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int r = pos + 1; r < n; ++r) idx[r] = idx[r - 1] + 1;
  }
  (void)pick;
  return best;
}

// Uniform grid minimization of a box-bounded MIQCQP over continuous variables
// and full enumeration of the original binaries.
inline double grid_minimum(const MiqcqpInstance& inst, int points_per_dim) {
  double best = std::numeric_limits<double>::infinity();
  const long combos = static_cast<long>(std::pow(points_per_dim, inst.n));
  const long ycombos = 1L << inst.k;
  std::vector<double> x(inst.n), y(inst.k);
  for (long yc = 0; yc < ycombos; ++yc) {
    for (int j = 0; j < inst.k; ++j) y[j] = (yc >> j) & 1;
    for (long t = 0; t < combos; ++t) {
      long rem = t;
      for (int i = 0; i < inst.n; ++i) {
        const int step = rem % points_per_dim;
        rem /= points_per_dim;
        x[i] = inst.bounds[i].lo +
               inst.bounds[i].width() * step / (points_per_dim - 1);
      }
      if (inst.max_constraint_violation(x, y) <= 1e-9)
        best = std::min(best, inst.objective.evaluate(x, y));
    }
  }
  return best;
}

// Random box-bounded QP generator in the boxQP family: min x'Qx + c'x over
// [0,1]^n with controllable density and coefficient scales.
inline MiqcqpInstance random_boxqp(int n, double density, uint64_t seed, double q_scale = 1.0,
                                   double c_scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MiqcqpInstance inst;
  inst.n = n;
  inst.k = 0;
  inst.bounds.assign(n, Interval{0.0, 1.0});
  inst.objective.c.resize(n);
  for (int i = 0; i < n; ++i) inst.objective.c[i] = c_scale * coeff(rng);
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) {
      if (unit(rng) <= density) {
        const double q = q_scale * coeff(rng);
        if (q != 0.0) inst.objective.q.push_back(QuadTriplet{i, k, q});
      }
    }
  }
  if (inst.objective.q.empty()) inst.objective.q.push_back(QuadTriplet{0, 0, -q_scale});
  return inst;
}

}  // namespace quadrelax::testing
