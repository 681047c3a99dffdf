// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "quadrelax/model.hpp"

namespace quadrelax {

// Variables and rows appended to a host model by a builder.
struct LinearFragment {
  std::vector<VarId> new_vars;
  std::vector<int> rows;

  void merge(const LinearFragment& other) {
    new_vars.insert(new_vars.end(), other.new_vars.begin(), other.new_vars.end());
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }
};

// McCormick envelope of z = x*y over xb x yb: the four inequalities whose
// feasible set is the convex hull of the bilinear graph over the box.
LinearFragment bilinear_envelope(MipModel& m, const LinExpr& x, Interval xb, const LinExpr& y,
                                 Interval yb, const LinExpr& z);
LinearFragment bilinear_envelope(MipModel& m, VarId x, VarId y, VarId z);

// McCormick envelope of z = x*beta for binary beta; exact once beta is 0/1.
LinearFragment binary_envelope(MipModel& m, const LinExpr& x, Interval xb, VarId beta,
                               const LinExpr& z);
LinearFragment binary_envelope(MipModel& m, VarId x, VarId beta, VarId z);

// Secant-and-tangents envelope of y = x^2 over xb: two underestimating
// tangents at the interval ends plus the secant overestimator.
LinearFragment square_envelope(MipModel& m, const LinExpr& x, Interval xb, const LinExpr& y);
LinearFragment square_envelope(MipModel& m, VarId x, VarId y);

struct McCormickError {
  double value = 0.0;  // (1/4) * width(x) * width(y)
  double at_x = 0.0;   // attained at the box center
  double at_y = 0.0;
};

McCormickError mccormick_max_error(Interval xb, Interval yb);

// Pointwise vertical extent of the bilinear envelope at (x, y): the interval of
// z values admitted by the four rows.
Interval mccormick_z_range(Interval xb, Interval yb, double x, double y);

// Same for the square envelope: admitted y-range at a given x.
Interval square_envelope_range(Interval xb, double x);

}  // namespace quadrelax
