// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "quadrelax/model.hpp"

namespace quadrelax {

struct SolveLimits {
  long max_nodes = 100000000;
  double max_seconds = 1e18;
  double rel_gap = 1e-4;
  double feas_tol = 1e-7;
  double lp_pivot_tol = 1e-9;

  void validate() const {
    if (max_nodes <= 0 || max_seconds <= 0 || rel_gap <= 0 || feas_tol <= 0 || lp_pivot_tol <= 0)
      throw ConfigError("solve limits must be positive");
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Stalled };

struct LpResult {
  LpStatus status = LpStatus::Stalled;
  double objective = 0.0;              // includes the model constant
  std::vector<double> values;          // structural variables only
  long iterations = 0;
};

// Bounded-variable primal simplex over a dense tableau. Dantzig pricing with
// a Harris-style two-pass ratio test; switches to Bland's rule after a streak
// of degenerate pivots. The basis persists across solves, so bound changes
// (branching, fixed-x probes) warm-start from the previous optimum.
class SimplexSolver {
 public:
  explicit SimplexSolver(const MipModel& model, double feas_tol = 1e-7, double pivot_tol = 1e-9);

  void set_var_bounds(VarId v, double lo, double hi);
  void restore_all_bounds();

  // Structural objective override (e.g. min +y / min -y probes).
  void set_objective(const std::vector<std::pair<VarId, double>>& coeffs, double constant = 0.0);
  void set_objective_from_model();

  LpResult solve();

  int num_structural() const { return n_; }
  long total_pivots() const { return total_pivots_; }

 private:
  enum class VStat : int8_t { Basic, AtLower, AtUpper };

  double& tab(int row, int col) { return tab_[static_cast<size_t>(row) * cols_ + col]; }
  const double& tab(int row, int col) const {
    return tab_[static_cast<size_t>(row) * cols_ + col];
  }

  void build_initial_basis();
  void refactorize();            // rebuild tableau from the current basis list
  void compute_basic_values();
  double nonbasic_value(int j) const;
  void pivot(int row, int col);
  bool phase1(long& iters);      // true when primal feasible
  LpStatus phase2(long& iters);
  double residual_inf_norm() const;

  const MipModel* model_;
  int n_ = 0;     // structural
  int m_ = 0;     // rows (one slack each)
  int cols_ = 0;  // n_ + m_

  std::vector<double> lower_, upper_;        // working bounds, size cols_
  std::vector<double> base_lower_, base_upper_;
  std::vector<double> cost_;                 // structural + zero slacks
  double cost_constant_ = 0.0;

  std::vector<double> tab_;     // m_ x cols_, equals B^{-1}[A I]
  std::vector<double> binv_b_;  // B^{-1} b
  std::vector<double> xb_;      // basic values
  std::vector<double> zrow_;    // reduced costs c - c_B' B^{-1} [A I]
  std::vector<int> basis_;      // var in each row
  std::vector<int> row_of_;     // -1 when nonbasic
  std::vector<VStat> vstat_;

  double feas_tol_;
  double pivot_tol_;
  long total_pivots_ = 0;
  long degenerate_streak_ = 0;
  bool bland_ = false;
  long max_iterations_ = 0;
};

// One-shot LP solve of the model with binaries relaxed to [0,1].
// Throws NumericalFailure when pivoting stalls beyond the iteration cap.
Solution solve_lp(const MipModel& model, const SolveLimits& limits = {});

}  // namespace quadrelax
