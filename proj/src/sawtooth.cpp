// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/sawtooth.hpp"

#include <algorithm>
#include <cmath>

namespace quadrelax {

double tooth_iterate(double x, int j) {
  if (x < -1e-12 || x > 1.0 + 1e-12)
    throw DomainError("tooth_iterate: x = " + std::to_string(x) + " outside [0,1]");
  double g = std::clamp(x, 0.0, 1.0);
  for (int i = 0; i < j; ++i) g = std::min(2.0 * g, 2.0 * (1.0 - g));
  return g;
}

double sawtooth_value(double x, int L) {
  if (x < -1e-12 || x > 1.0 + 1e-12)
    throw DomainError("sawtooth_value: x = " + std::to_string(x) + " outside [0,1]");
  double g = std::clamp(x, 0.0, 1.0);
  double value = g;
  for (int j = 1; j <= L; ++j) {
    g = std::min(2.0 * g, 2.0 * (1.0 - g));
    value -= std::ldexp(g, -2 * j);
  }
  return value;
}

namespace {

std::vector<VarId> add_g_vars(MipModel& m, VarId x, int L) {
  const std::string base = m.var(x).name;
  std::vector<VarId> g(L + 1);
  for (int j = 0; j <= L; ++j) g[j] = m.add_continuous(base + "_g" + std::to_string(j), 0.0, 1.0);
  return g;
}

}  // namespace

SawtoothFragment build_sawtooth_mip(MipModel& m, VarId x, int L) {
  SawtoothFragment f;
  f.g = add_g_vars(m, x, L);
  const std::string base = m.var(x).name;
  f.rows.push_back(m.add_row(LinExpr(f.g[0], 1.0).add(x, -1.0), RowSense::EQ, 0.0));
  for (int j = 1; j <= L; ++j) {
    const VarId a = m.add_binary(base + "_a" + std::to_string(j));
    f.alpha.push_back(a);
    // 2(g_{j-1} - a_j) <= g_j <= 2 g_{j-1}
    f.rows.push_back(
        m.add_row(LinExpr(f.g[j], 1.0).add(f.g[j - 1], -2.0).add(a, 2.0), RowSense::GE, 0.0));
    f.rows.push_back(m.add_row(LinExpr(f.g[j], 1.0).add(f.g[j - 1], -2.0), RowSense::LE, 0.0));
    // 2(a_j - g_{j-1}) <= g_j <= 2(1 - g_{j-1})
    f.rows.push_back(
        m.add_row(LinExpr(f.g[j], 1.0).add(a, -2.0).add(f.g[j - 1], 2.0), RowSense::GE, 0.0));
    f.rows.push_back(
        m.add_row(LinExpr(f.g[j], 1.0).add(f.g[j - 1], 2.0), RowSense::LE, 2.0));
  }
  return f;
}

SawtoothFragment build_sawtooth_lp(MipModel& m, VarId x, int L) {
  SawtoothFragment f;
  f.g = add_g_vars(m, x, L);
  f.rows.push_back(m.add_row(LinExpr(f.g[0], 1.0).add(x, -1.0), RowSense::EQ, 0.0));
  for (int j = 1; j <= L; ++j) {
    f.rows.push_back(m.add_row(LinExpr(f.g[j], 1.0).add(f.g[j - 1], -2.0), RowSense::LE, 0.0));
    f.rows.push_back(
        m.add_row(LinExpr(f.g[j], 1.0).add(f.g[j - 1], 2.0), RowSense::LE, 2.0));
  }
  return f;
}

LinearFragment build_epigraph_relaxation(MipModel& m, VarId x, VarId y, int L) {
  LinearFragment frag;
  SawtoothFragment saw = build_sawtooth_lp(m, x, L);
  frag.new_vars = saw.g;
  frag.rows = saw.rows;

  // y >= F^j(x, g) - 2^{-2j-2}; every level j = 0..L is emitted.
  for (int j = 0; j <= L; ++j) {
    LinExpr e(y, 1.0);
    e.add(x, -1.0);
    for (int i = 1; i <= j; ++i) e.add(saw.g[i], std::ldexp(1.0, -2 * i));
    frag.rows.push_back(m.add_row(std::move(e), RowSense::GE, -std::ldexp(1.0, -2 * j - 2)));
  }
  frag.rows.push_back(m.add_row(LinExpr(y, 1.0), RowSense::GE, 0.0));
  frag.rows.push_back(m.add_row(LinExpr(y, 1.0).add(x, -2.0), RowSense::GE, -1.0));
  return frag;
}

}  // namespace quadrelax
