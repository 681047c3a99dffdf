// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "quadrelax/envelopes.hpp"
#include "quadrelax/model.hpp"

namespace quadrelax {

// j-fold composition of the tooth G(x) = min{2x, 2(1-x)}; G^0(x) = x.
// Throws DomainError when x lies outside [0,1] by more than 1e-12.
double tooth_iterate(double x, int j);

// Piecewise-linear approximation of x^2: x - sum_{j=1..L} 2^{-2j} G^j(x).
// Interpolates x^2 exactly at every multiple of 2^-L.
double sawtooth_value(double x, int L);

struct SawtoothFragment {
  std::vector<VarId> g;      // g_0..g_L, all in [0,1], g_0 tied to the host x
  std::vector<VarId> alpha;  // binary selectors; empty in the LP variant
  std::vector<int> rows;
};

// The MIP set: with the alphas binary, g_j is forced to G^j(x) exactly.
SawtoothFragment build_sawtooth_mip(MipModel& m, VarId x, int L);

// The LP set after projecting out alpha: g_j <= 2 g_{j-1}, g_j <= 2(1 - g_{j-1}).
SawtoothFragment build_sawtooth_lp(MipModel& m, VarId x, int L);

// Depth-L epigraph relaxation of y >= x^2 on [0,1]:
//   y >= x - sum_{i<=j} 2^{-2i} g_i - 2^{-2j-2}   for j = 0..L
//   y >= 0,  y >= 2x - 1,  (x, g) in the LP sawtooth set.
// The fragment's new_vars are g_0..g_L in order.
LinearFragment build_epigraph_relaxation(MipModel& m, VarId x, VarId y, int L);

}  // namespace quadrelax
