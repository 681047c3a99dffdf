// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/nmdt.hpp"

#include <cmath>

#include "quadrelax/sawtooth.hpp"

namespace quadrelax {

DigitRecord make_digits(MipModel& m, VarId x, int L) {
  if (L < 1) throw ConfigError("discretization depth L must be >= 1");
  DigitRecord d;
  d.depth = L;
  const std::string base = m.var(x).name;
  LinExpr link(x, 1.0);
  for (int j = 1; j <= L; ++j) {
    const VarId b = m.add_binary(base + "_b" + std::to_string(j));
    d.beta.push_back(b);
    link.add(b, -std::ldexp(1.0, -j));
  }
  d.delta = m.add_continuous(base + "_res", 0.0, std::ldexp(1.0, -L));
  link.add(d.delta, -1.0);
  d.equality_row = m.add_row(std::move(link), RowSense::EQ, 0.0);
  return d;
}

namespace {

// Shared assembly for z = x*y (bilinear) and y = x*x (square): the binary
// products pair each digit with `factor`, the residual McCormick couples
// (delta_x, factor).
NmdtFragment build_nmdt(MipModel& m, VarId z, VarId factor, const DigitRecord& digits) {
  const int L = digits.depth;
  const double w = std::ldexp(1.0, -L);
  const Interval fb = m.var(factor).bounds;
  const std::string zname = m.var(z).name;

  NmdtFragment f;
  f.beta = digits.beta;
  f.delta_x = digits.delta;

  LinExpr zsum(z, 1.0);
  for (int j = 1; j <= L; ++j) {
    const VarId u = m.add_continuous(zname + "_u" + std::to_string(j), std::min(0.0, fb.lo),
                                     std::max(0.0, fb.hi));
    f.u.push_back(u);
    f.new_vars.push_back(u);
    LinearFragment env =
        binary_envelope(m, LinExpr(factor, 1.0), fb, digits.beta[j - 1], LinExpr(u, 1.0));
    f.rows.insert(f.rows.end(), env.rows.begin(), env.rows.end());
    zsum.add(u, -std::ldexp(1.0, -j));
  }
  f.delta_z = m.add_continuous(zname + "_res", std::min(0.0, w * fb.lo),
                               std::max(0.0, w * fb.hi));
  f.new_vars.push_back(f.delta_z);
  LinearFragment env = bilinear_envelope(m, LinExpr(digits.delta, 1.0), Interval{0.0, w},
                                         LinExpr(factor, 1.0), fb, LinExpr(f.delta_z, 1.0));
  f.rows.insert(f.rows.end(), env.rows.begin(), env.rows.end());
  zsum.add(f.delta_z, -1.0);
  f.rows.push_back(m.add_row(std::move(zsum), RowSense::EQ, 0.0));
  return f;
}

}  // namespace

NmdtFragment relax_bilinear_nmdt(MipModel& m, VarId z, VarId /*x*/, VarId y,
                                 const DigitRecord& x_digits) {
  return build_nmdt(m, z, y, x_digits);
}

NmdtFragment relax_bilinear_nmdt(MipModel& m, VarId z, VarId x, VarId y, int L) {
  const DigitRecord digits = make_digits(m, x, L);
  return relax_bilinear_nmdt(m, z, x, y, digits);
}

NmdtFragment relax_square_nmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits) {
  return build_nmdt(m, y, x, x_digits);
}

NmdtFragment relax_square_nmdt(MipModel& m, VarId y, VarId x, int L) {
  const DigitRecord digits = make_digits(m, x, L);
  return relax_square_nmdt(m, y, x, digits);
}

NmdtFragment relax_square_tnmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits,
                                int L1) {
  if (L1 < x_digits.depth) throw ConfigError("T-NMDT requires L1 >= L");
  NmdtFragment f = relax_square_nmdt(m, y, x, x_digits);
  LinearFragment epi = build_epigraph_relaxation(m, x, y, L1);
  f.epigraph_g = epi.new_vars;
  f.new_vars.insert(f.new_vars.end(), epi.new_vars.begin(), epi.new_vars.end());
  f.rows.insert(f.rows.end(), epi.rows.begin(), epi.rows.end());
  return f;
}

NmdtFragment relax_square_tnmdt(MipModel& m, VarId y, VarId x, int L, int L1) {
  if (L1 < L) throw ConfigError("T-NMDT requires L1 >= L");
  const DigitRecord digits = make_digits(m, x, L);
  return relax_square_tnmdt(m, y, x, digits, L1);
}

}  // namespace quadrelax
