// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "quadrelax/envelopes.hpp"
#include "quadrelax/model.hpp"

namespace quadrelax {

// Base-2 digit expansion of a [0,1] variable: x = sum_j 2^-j beta_j + delta
// with delta in [0, 2^-L]. Created once per variable and shared by every
// fragment that discretizes it.
struct DigitRecord {
  std::vector<VarId> beta;
  VarId delta = kInvalidVar;
  int depth = 0;
  int equality_row = -1;
};

DigitRecord make_digits(MipModel& m, VarId x, int L);

struct NmdtFragment {
  std::vector<VarId> beta;  // digits of the discretized variable (shared ids)
  VarId delta_x = kInvalidVar;
  std::vector<VarId> u;     // per-digit product variables
  VarId delta_z = kInvalidVar;
  std::vector<VarId> epigraph_g;  // tightened square variant only
  std::vector<VarId> new_vars;
  std::vector<int> rows;
};

// z = x*y with x discretized: L binary-product envelopes on (y, beta_j) plus
// one McCormick on (delta_x, y). Hosts must live on [0,1].
NmdtFragment relax_bilinear_nmdt(MipModel& m, VarId z, VarId x, VarId y,
                                 const DigitRecord& x_digits);
NmdtFragment relax_bilinear_nmdt(MipModel& m, VarId z, VarId x, VarId y, int L);

// y = x^2: binary products pair the digits with x itself, the residual
// McCormick couples (delta_x, x).
NmdtFragment relax_square_nmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits);
NmdtFragment relax_square_nmdt(MipModel& m, VarId y, VarId x, int L);

// T-NMDT: all square-NMDT rows plus the depth-L1 sawtooth epigraph relaxation
// on (x, y). Throws ConfigError when L1 < L.
NmdtFragment relax_square_tnmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits,
                                int L1);
NmdtFragment relax_square_tnmdt(MipModel& m, VarId y, VarId x, int L, int L1);

}  // namespace quadrelax
