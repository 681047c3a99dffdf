// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/mip.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace quadrelax {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  double bound;
  long id;
  std::vector<int8_t> fix;  // one entry per binary: -1 free, 0, 1
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

}  // namespace

MipResult solve_mip(const MipModel& model, const SolveLimits& limits) {
  limits.validate();
  model.validate();
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  std::vector<VarId> binaries;
  for (int v = 0; v < model.num_vars(); ++v) {
    if (model.var(v).kind == VarKind::Binary) binaries.push_back(v);
  }

  SimplexSolver solver(model, limits.feas_tol, limits.lp_pivot_tol);
  MipResult res;
  res.dual_bound = -kInf;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{-kInf, 0, std::vector<int8_t>(binaries.size(), -1)});
  long next_id = 1;

  double inc_obj = kInf;
  bool hit_limit = false;

  while (!open.empty()) {
    if (res.node_count >= limits.max_nodes || elapsed() > limits.max_seconds) {
      hit_limit = true;
      break;
    }
    if (res.incumbent) {
      const double gap = (inc_obj - open.top().bound) / std::max(std::abs(inc_obj), 1e-10);
      if (gap <= limits.rel_gap) break;
    }
    // Best-bound selection: the top of the heap is the global dual bound.
    Node node = open.top();
    open.pop();
    if (std::isfinite(inc_obj) && node.bound >= inc_obj - 1e-12) continue;

    solver.restore_all_bounds();
    for (size_t b = 0; b < binaries.size(); ++b) {
      if (node.fix[b] >= 0) {
        const double v = node.fix[b];
        solver.set_var_bounds(binaries[b], v, v);
      }
    }

    LpResult lp;
    try {
      lp = solver.solve();
    } catch (const NumericalFailure&) {
      // One cold retry with a fresh basis before giving up on the node.
      solver = SimplexSolver(model, limits.feas_tol, limits.lp_pivot_tol);
      solver.restore_all_bounds();
      for (size_t b = 0; b < binaries.size(); ++b) {
        if (node.fix[b] >= 0)
          solver.set_var_bounds(binaries[b], static_cast<double>(node.fix[b]),
                                static_cast<double>(node.fix[b]));
      }
      lp = solver.solve();
    }
    ++res.node_count;

    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded) {
      res.status = SolveStatus::Unbounded;
      res.dual_bound = -kInf;
      return res;
    }
    if (lp.status == LpStatus::Stalled) throw NumericalFailure("node LP stalled");

    if (std::isfinite(inc_obj) && lp.objective >= inc_obj - 1e-12) continue;

    int branch_var = -1;
    double branch_score = -1.0;
    for (size_t b = 0; b < binaries.size(); ++b) {
      const double v = lp.values[binaries[b]];
      const double frac = std::abs(v - std::round(v));
      if (frac > kIntTol && frac > branch_score + 1e-15) {
        branch_score = frac;
        branch_var = static_cast<int>(b);
      }
    }

    if (branch_var < 0) {
      // Integral: candidate incumbent.
      if (lp.objective < inc_obj) {
        inc_obj = lp.objective;
        Solution sol;
        sol.values = lp.values;
        sol.objective_value = lp.objective;
        sol.status = SolveStatus::Feasible;
        res.incumbent = sol;
      }
      continue;
    }

    res.branch_sequence.push_back(binaries[branch_var]);
    for (int8_t val : {static_cast<int8_t>(0), static_cast<int8_t>(1)}) {
      Node child;
      child.bound = lp.objective;
      child.id = next_id++;
      child.fix = node.fix;
      child.fix[branch_var] = val;
      open.push(std::move(child));
    }

    // Early stop once the relative gap is proven.
    if (res.incumbent && !open.empty()) {
      const double gap = (inc_obj - open.top().bound) / std::max(std::abs(inc_obj), 1e-10);
      if (gap <= limits.rel_gap) break;
    }
  }

  if (open.empty()) {
    if (res.incumbent) {
      res.dual_bound = inc_obj;
      res.status = SolveStatus::Optimal;
      res.incumbent->status = SolveStatus::Optimal;
    } else {
      res.dual_bound = kInf;
      res.status = hit_limit ? SolveStatus::LimitReached : SolveStatus::Infeasible;
    }
    return res;
  }

  res.dual_bound = std::min(open.top().bound, inc_obj);
  if (res.incumbent) {
    const double gap = (inc_obj - res.dual_bound) / std::max(std::abs(inc_obj), 1e-10);
    if (gap <= limits.rel_gap) {
      res.status = SolveStatus::Optimal;
      res.incumbent->status = SolveStatus::Optimal;
    } else {
      res.status = SolveStatus::Feasible;
    }
  } else {
    res.status = SolveStatus::LimitReached;
  }
  return res;
}

}  // namespace quadrelax
