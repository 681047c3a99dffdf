// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "quadrelax/nmdt.hpp"

namespace quadrelax {

struct DnmdtFragment {
  std::vector<VarId> beta_x, beta_y;  // shared digit ids
  VarId delta_x = kInvalidVar, delta_y = kInvalidVar;
  std::vector<VarId> u, v;  // per-digit products for the two blended factors
  VarId delta_z = kInvalidVar;
  double lambda = 0.5;
  std::vector<VarId> epigraph_g;  // tightened square variant only
  std::vector<VarId> new_vars;
  std::vector<int> rows;
};

// z = x*y with both variables discretized:
//   u_j in M(lambda*dy + (1-lambda)*y, beta_x_j)
//   v_j in M((1-lambda)*dx + lambda*x, beta_y_j)
//   delta_z in M(dx, dy)
// The blended factors carry bounds [0, lambda*2^-L + (1-lambda)] and
// [0, (1-lambda)*2^-L + lambda].
DnmdtFragment relax_bilinear_dnmdt(MipModel& m, VarId z, VarId x, VarId y,
                                   const DigitRecord& x_digits, const DigitRecord& y_digits,
                                   double lambda);
DnmdtFragment relax_bilinear_dnmdt(MipModel& m, VarId z, VarId x, VarId y, int L,
                                   double lambda = 0.5);

// y = x^2 via z = x*y at y = x: one digit vector, binary products on
// (dx + x, beta_j) with dx + x in [0, 2^-L + 1], residual square envelope on dx.
DnmdtFragment relax_square_dnmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits);
DnmdtFragment relax_square_dnmdt(MipModel& m, VarId y, VarId x, int L);

// T-D-NMDT: all square rows retained plus the depth-L1 epigraph relaxation.
DnmdtFragment relax_square_tdnmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits,
                                  int L1);
DnmdtFragment relax_square_tdnmdt(MipModel& m, VarId y, VarId x, int L, int L1);

}  // namespace quadrelax
