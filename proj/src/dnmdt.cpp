// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/dnmdt.hpp"

#include <cmath>

#include "quadrelax/sawtooth.hpp"

namespace quadrelax {

DnmdtFragment relax_bilinear_dnmdt(MipModel& m, VarId z, VarId x, VarId y,
                                   const DigitRecord& x_digits, const DigitRecord& y_digits,
                                   double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0,1]");
  if (x_digits.depth != y_digits.depth)
    throw ConfigError("D-NMDT requires matching depths on both variables");
  const int L = x_digits.depth;
  const double w = std::ldexp(1.0, -L);
  const std::string zname = m.var(z).name;

  DnmdtFragment f;
  f.lambda = lambda;
  f.beta_x = x_digits.beta;
  f.beta_y = y_digits.beta;
  f.delta_x = x_digits.delta;
  f.delta_y = y_digits.delta;

  // Blended continuous factors from the lambda-combination of the two
  // single-sided expansions.
  LinExpr ey;
  ey.add(y_digits.delta, lambda).add(y, 1.0 - lambda);
  const Interval ey_bounds{0.0, lambda * w + (1.0 - lambda)};
  LinExpr ex;
  ex.add(x_digits.delta, 1.0 - lambda).add(x, lambda);
  const Interval ex_bounds{0.0, (1.0 - lambda) * w + lambda};

  LinExpr zsum(z, 1.0);
  for (int j = 1; j <= L; ++j) {
    const VarId u = m.add_continuous(zname + "_u" + std::to_string(j), 0.0, ey_bounds.hi);
    const VarId v = m.add_continuous(zname + "_v" + std::to_string(j), 0.0, ex_bounds.hi);
    f.u.push_back(u);
    f.v.push_back(v);
    f.new_vars.push_back(u);
    f.new_vars.push_back(v);
    LinearFragment eu = binary_envelope(m, ey, ey_bounds, x_digits.beta[j - 1], LinExpr(u, 1.0));
    LinearFragment ev = binary_envelope(m, ex, ex_bounds, y_digits.beta[j - 1], LinExpr(v, 1.0));
    f.rows.insert(f.rows.end(), eu.rows.begin(), eu.rows.end());
    f.rows.insert(f.rows.end(), ev.rows.begin(), ev.rows.end());
    zsum.add(u, -std::ldexp(1.0, -j)).add(v, -std::ldexp(1.0, -j));
  }
  f.delta_z = m.add_continuous(zname + "_res", 0.0, w * w);
  f.new_vars.push_back(f.delta_z);
  LinearFragment env =
      bilinear_envelope(m, LinExpr(x_digits.delta, 1.0), Interval{0.0, w},
                        LinExpr(y_digits.delta, 1.0), Interval{0.0, w}, LinExpr(f.delta_z, 1.0));
  f.rows.insert(f.rows.end(), env.rows.begin(), env.rows.end());
  zsum.add(f.delta_z, -1.0);
  f.rows.push_back(m.add_row(std::move(zsum), RowSense::EQ, 0.0));
  return f;
}

DnmdtFragment relax_bilinear_dnmdt(MipModel& m, VarId z, VarId x, VarId y, int L, double lambda) {
  const DigitRecord dx = make_digits(m, x, L);
  const DigitRecord dy = make_digits(m, y, L);
  return relax_bilinear_dnmdt(m, z, x, y, dx, dy, lambda);
}

DnmdtFragment relax_square_dnmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits) {
  const int L = x_digits.depth;
  const double w = std::ldexp(1.0, -L);
  const std::string zname = m.var(y).name;

  DnmdtFragment f;
  f.lambda = 1.0;
  f.beta_x = x_digits.beta;
  f.delta_x = x_digits.delta;

  LinExpr blended;
  blended.add(x_digits.delta, 1.0).add(x, 1.0);
  const Interval blended_bounds{0.0, w + 1.0};

  LinExpr zsum(y, 1.0);
  for (int j = 1; j <= L; ++j) {
    const VarId u = m.add_continuous(zname + "_u" + std::to_string(j), 0.0, blended_bounds.hi);
    f.u.push_back(u);
    f.new_vars.push_back(u);
    LinearFragment env =
        binary_envelope(m, blended, blended_bounds, x_digits.beta[j - 1], LinExpr(u, 1.0));
    f.rows.insert(f.rows.end(), env.rows.begin(), env.rows.end());
    zsum.add(u, -std::ldexp(1.0, -j));
  }
  f.delta_z = m.add_continuous(zname + "_res", 0.0, w * w);
  f.new_vars.push_back(f.delta_z);
  LinearFragment env = square_envelope(m, LinExpr(x_digits.delta, 1.0), Interval{0.0, w},
                                       LinExpr(f.delta_z, 1.0));
  f.rows.insert(f.rows.end(), env.rows.begin(), env.rows.end());
  zsum.add(f.delta_z, -1.0);
  f.rows.push_back(m.add_row(std::move(zsum), RowSense::EQ, 0.0));
  return f;
}

DnmdtFragment relax_square_dnmdt(MipModel& m, VarId y, VarId x, int L) {
  const DigitRecord digits = make_digits(m, x, L);
  return relax_square_dnmdt(m, y, x, digits);
}

DnmdtFragment relax_square_tdnmdt(MipModel& m, VarId y, VarId x, const DigitRecord& x_digits,
                                  int L1) {
  if (L1 < x_digits.depth) throw ConfigError("T-D-NMDT requires L1 >= L");
  DnmdtFragment f = relax_square_dnmdt(m, y, x, x_digits);
  LinearFragment epi = build_epigraph_relaxation(m, x, y, L1);
  f.epigraph_g = epi.new_vars;
  f.new_vars.insert(f.new_vars.end(), epi.new_vars.begin(), epi.new_vars.end());
  f.rows.insert(f.rows.end(), epi.rows.begin(), epi.rows.end());
  return f;
}

DnmdtFragment relax_square_tdnmdt(MipModel& m, VarId y, VarId x, int L, int L1) {
  if (L1 < L) throw ConfigError("T-D-NMDT requires L1 >= L");
  const DigitRecord digits = make_digits(m, x, L);
  return relax_square_tdnmdt(m, y, x, digits, L1);
}

}  // namespace quadrelax
