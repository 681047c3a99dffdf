// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/envelopes.hpp"

#include <algorithm>

namespace quadrelax {

// z >= lo_x*y + lo_y*x - lo_x*lo_y        z <= hi_x*y + lo_y*x - hi_x*lo_y
// z >= hi_x*y + hi_y*x - hi_x*hi_y        z <= lo_x*y + hi_y*x - lo_x*hi_y
LinearFragment bilinear_envelope(MipModel& m, const LinExpr& x, Interval xb, const LinExpr& y,
                                 Interval yb, const LinExpr& z) {
  LinearFragment frag;
  auto row = [&](double cx, double cy, double c0, RowSense sense) {
    LinExpr e;
    e.add(z).add(y, -cy).add(x, -cx);
    frag.rows.push_back(m.add_row(std::move(e), sense, c0));
  };
  row(yb.lo, xb.lo, -xb.lo * yb.lo, RowSense::GE);
  row(yb.hi, xb.hi, -xb.hi * yb.hi, RowSense::GE);
  row(yb.lo, xb.hi, -xb.hi * yb.lo, RowSense::LE);
  row(yb.hi, xb.lo, -xb.lo * yb.hi, RowSense::LE);
  return frag;
}

LinearFragment bilinear_envelope(MipModel& m, VarId x, VarId y, VarId z) {
  return bilinear_envelope(m, LinExpr(x, 1.0), m.var(x).bounds, LinExpr(y, 1.0), m.var(y).bounds,
                           LinExpr(z, 1.0));
}

// lo*beta <= z <= hi*beta        x - hi*(1-beta) <= z <= x - lo*(1-beta)
LinearFragment binary_envelope(MipModel& m, const LinExpr& x, Interval xb, VarId beta,
                               const LinExpr& z) {
  LinearFragment frag;
  {
    LinExpr e;
    e.add(z).add(beta, -xb.lo);
    frag.rows.push_back(m.add_row(std::move(e), RowSense::GE, 0.0));
  }
  {
    LinExpr e;
    e.add(z).add(beta, -xb.hi);
    frag.rows.push_back(m.add_row(std::move(e), RowSense::LE, 0.0));
  }
  {
    LinExpr e;
    e.add(z).add(x, -1.0).add(beta, -xb.hi);
    frag.rows.push_back(m.add_row(std::move(e), RowSense::GE, -xb.hi));
  }
  {
    LinExpr e;
    e.add(z).add(x, -1.0).add(beta, -xb.lo);
    frag.rows.push_back(m.add_row(std::move(e), RowSense::LE, -xb.lo));
  }
  return frag;
}

LinearFragment binary_envelope(MipModel& m, VarId x, VarId beta, VarId z) {
  return binary_envelope(m, LinExpr(x, 1.0), m.var(x).bounds, beta, LinExpr(z, 1.0));
}

// y >= 2*lo*x - lo^2      y >= 2*hi*x - hi^2      y <= (lo+hi)*x - lo*hi
LinearFragment square_envelope(MipModel& m, const LinExpr& x, Interval xb, const LinExpr& y) {
  LinearFragment frag;
  auto row = [&](double cx, double c0, RowSense sense) {
    LinExpr e;
    e.add(y).add(x, -cx);
    frag.rows.push_back(m.add_row(std::move(e), sense, c0));
  };
  row(2.0 * xb.lo, -xb.lo * xb.lo, RowSense::GE);
  row(2.0 * xb.hi, -xb.hi * xb.hi, RowSense::GE);
  row(xb.lo + xb.hi, -xb.lo * xb.hi, RowSense::LE);
  return frag;
}

LinearFragment square_envelope(MipModel& m, VarId x, VarId y) {
  return square_envelope(m, LinExpr(x, 1.0), m.var(x).bounds, LinExpr(y, 1.0));
}

McCormickError mccormick_max_error(Interval xb, Interval yb) {
  McCormickError e;
  e.value = 0.25 * xb.width() * yb.width();
  e.at_x = xb.mid();
  e.at_y = yb.mid();
  return e;
}

Interval mccormick_z_range(Interval xb, Interval yb, double x, double y) {
  const double lo = std::max(xb.lo * y + yb.lo * x - xb.lo * yb.lo,
                             xb.hi * y + yb.hi * x - xb.hi * yb.hi);
  const double hi = std::min(xb.hi * y + yb.lo * x - xb.hi * yb.lo,
                             xb.lo * y + yb.hi * x - xb.lo * yb.hi);
  return Interval{lo, hi};
}

Interval square_envelope_range(Interval xb, double x) {
  const double lo = std::max(2.0 * xb.lo * x - xb.lo * xb.lo, 2.0 * xb.hi * x - xb.hi * xb.hi);
  const double hi = (xb.lo + xb.hi) * x - xb.lo * xb.hi;
  return Interval{lo, hi};
}

}  // namespace quadrelax
