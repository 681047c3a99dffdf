// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "quadrelax/dnmdt.hpp"
#include "quadrelax/envelopes.hpp"
#include "quadrelax/mip.hpp"
#include "quadrelax/simplex.hpp"

using namespace quadrelax;

namespace {

struct BilinearModel {
  MipModel m;
  VarId x, y, z;
  DnmdtFragment frag;
};

BilinearModel make_bilinear(int L, double lambda) {
  BilinearModel b;
  b.x = b.m.add_continuous("x", 0.0, 1.0);
  b.y = b.m.add_continuous("y", 0.0, 1.0);
  b.z = b.m.add_continuous("z", -1.0, 2.0);
  b.frag = relax_bilinear_dnmdt(b.m, b.z, b.x, b.y, L, lambda);
  return b;
}

struct SquareModel {
  MipModel m;
  VarId x, y;
  DnmdtFragment frag;
};

SquareModel make_square(int L, int L1 = 0) {
  SquareModel s;
  s.x = s.m.add_continuous("x", 0.0, 1.0);
  s.y = s.m.add_continuous("y", 0.0, 1.0);
  s.frag =
      L1 > 0 ? relax_square_tdnmdt(s.m, s.y, s.x, L, L1) : relax_square_dnmdt(s.m, s.y, s.x, L);
  return s;
}

struct Digits {
  long cell;
  double delta;
};

Digits digits_of(double x, int L) {
  const long cells = 1L << L;
  const long cell = std::min(static_cast<long>(std::floor(x * cells)), cells - 1);
  return {cell, x - std::ldexp(static_cast<double>(cell), -L)};
}

}  // namespace

TEST_CASE("bilinear D-NMDT extends graph points for several lambdas") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
    for (int L : {1, 2}) {
      BilinearModel b = make_bilinear(L, lambda);
      for (int t = 0; t < 1500; ++t) {
        const double x = unit(rng), y = unit(rng);
        const Digits dx = digits_of(x, L), dy = digits_of(y, L);
        std::vector<double> vals(b.m.num_vars(), 0.0);
        vals[b.x] = x;
        vals[b.y] = y;
        vals[b.z] = x * y;
        for (int j = 1; j <= L; ++j) {
          vals[b.frag.beta_x[j - 1]] = (dx.cell >> (L - j)) & 1;
          vals[b.frag.beta_y[j - 1]] = (dy.cell >> (L - j)) & 1;
        }
        vals[b.frag.delta_x] = dx.delta;
        vals[b.frag.delta_y] = dy.delta;
        const double ey = lambda * dy.delta + (1.0 - lambda) * y;
        const double ex = (1.0 - lambda) * dx.delta + lambda * x;
        for (int j = 1; j <= L; ++j) {
          vals[b.frag.u[j - 1]] = vals[b.frag.beta_x[j - 1]] * ey;
          vals[b.frag.v[j - 1]] = vals[b.frag.beta_y[j - 1]] * ex;
        }
        vals[b.frag.delta_z] = dx.delta * dy.delta;
        CHECK(b.m.max_violation(vals) <= 1e-9);
      }
    }
  }
}

TEST_CASE("fixed digit patterns project onto the grid-cell McCormick hull for every lambda") {
  // The per-digit envelopes are exact once the digits are integral, so the
  // residual McCormick is the only slack regardless of the blend.
  const int L = 1;
  const double w = 0.5;
  for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
    BilinearModel b = make_bilinear(L, lambda);
    SimplexSolver solver(b.m);
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (long cx = 0; cx < 2; ++cx) {
      for (long cy = 0; cy < 2; ++cy) {
        for (int t = 0; t < 6; ++t) {
          const double x = (cx + unit(rng)) * w;
          const double y = (cy + unit(rng)) * w;
          solver.restore_all_bounds();
          solver.set_var_bounds(b.x, x, x);
          solver.set_var_bounds(b.y, y, y);
          solver.set_var_bounds(b.frag.beta_x[0], static_cast<double>(cx),
                                static_cast<double>(cx));
          solver.set_var_bounds(b.frag.beta_y[0], static_cast<double>(cy),
                                static_cast<double>(cy));
          solver.set_objective({{b.z, 1.0}});
          const LpResult lo = solver.solve();
          solver.set_objective({{b.z, -1.0}});
          const LpResult hi = solver.solve();
          REQUIRE(lo.status == LpStatus::Optimal);
          REQUIRE(hi.status == LpStatus::Optimal);
          const Interval cell = mccormick_z_range(Interval{cx * w, (cx + 1) * w},
                                                  Interval{cy * w, (cy + 1) * w}, x, y);
          CHECK_MESSAGE(lo.objective == doctest::Approx(cell.lo).epsilon(1e-8),
                        "lambda=", lambda);
          CHECK_MESSAGE(-hi.objective == doctest::Approx(cell.hi).epsilon(1e-8),
                        "lambda=", lambda);
        }
      }
    }
  }
}

TEST_CASE("square D-NMDT pins y to the interpolant at breakpoints") {
  // At x = k 2^-L the MIP admits only y = x^2 (delta at 0 or the full cell).
  for (int L : {1, 2}) {
    SquareModel s = make_square(L);
    const long cells = 1L << L;
    for (long k = 0; k <= cells; k += cells > 2 ? 2 : 1) {
      const double xv = static_cast<double>(k) / cells;
      MipModel fixed = s.m;
      fixed.var(s.x).bounds = Interval{xv, xv};
      fixed.set_objective_coeff(s.y, 1.0);
      const MipResult lo = solve_mip(fixed);
      REQUIRE(lo.status == SolveStatus::Optimal);
      fixed.set_objective_coeff(s.y, -1.0);
      const MipResult hi = solve_mip(fixed);
      REQUIRE(hi.status == SolveStatus::Optimal);
      CHECK(lo.incumbent->objective_value == doctest::Approx(xv * xv).epsilon(1e-7));
      CHECK(-hi.incumbent->objective_value == doctest::Approx(xv * xv).epsilon(1e-7));
    }
  }
}

TEST_CASE("univariate D-NMDT LP witness is feasible yet below the hull") {
  for (int L : {1, 2, 3}) {
    SquareModel s = make_square(L);
    std::vector<double> vals(s.m.num_vars(), 0.0);
    vals[s.x] = 0.5;
    vals[s.y] = 0.0;
    for (int j = 1; j <= L; ++j) vals[s.frag.beta_x[j - 1]] = 0.5;
    vals[s.frag.delta_x] = std::ldexp(1.0, -L - 1);
    CHECK(s.m.max_violation(vals) <= 1e-12);
  }
}

TEST_CASE("T-D-NMDT lower envelope matches the depth-2 epigraph boundary") {
  SquareModel s = make_square(1, 2);
  SimplexSolver solver(s.m);
  solver.set_objective({{s.y, 1.0}});
  solver.set_var_bounds(s.x, 0.375, 0.375);
  const LpResult lp = solver.solve();
  REQUIRE(lp.status == LpStatus::Optimal);
  CHECK(lp.objective >= 0.125 - 1e-9);
  CHECK(lp.objective == doctest::Approx(0.140625).epsilon(1e-8));
}

TEST_CASE("tightened bound strictly improves at one half") {
  SquareModel plain = make_square(1);
  SquareModel tight = make_square(1, 1);
  SimplexSolver sp(plain.m), st(tight.m);
  sp.set_objective({{plain.y, 1.0}});
  st.set_objective({{tight.y, 1.0}});
  sp.set_var_bounds(plain.x, 0.5, 0.5);
  st.set_var_bounds(tight.x, 0.5, 0.5);
  CHECK(sp.solve().objective == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(st.solve().objective >= 0.1875 - 1e-9);
}

TEST_CASE("T-D-NMDT points remain D-NMDT feasible") {
  // The tightened model is the plain model plus rows, so its (x, y)
  // projection is contained in the plain projection.
  SquareModel plain = make_square(2);
  SquareModel tight = make_square(2, 3);
  SimplexSolver sp(plain.m), st(tight.m);
  sp.set_objective({});
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int contained = 0;
  for (int t = 0; t < 1000; ++t) {
    const double xv = unit(rng);
    st.set_var_bounds(tight.x, xv, xv);
    st.set_objective({{tight.y, 1.0}});
    const LpResult lo = st.solve();
    st.set_objective({{tight.y, -1.0}});
    const LpResult hi = st.solve();
    REQUIRE(lo.status == LpStatus::Optimal);
    REQUIRE(hi.status == LpStatus::Optimal);
    const double yv = lo.objective + unit(rng) * (-hi.objective - lo.objective);
    sp.set_var_bounds(plain.x, xv, xv);
    sp.set_var_bounds(plain.y, yv, yv);
    if (sp.solve().status == LpStatus::Optimal) ++contained;
    sp.restore_all_bounds();
  }
  CHECK(contained == 1000);
}

TEST_CASE("lambda outside the unit interval is rejected") {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId y = m.add_continuous("y", 0.0, 1.0);
  const VarId z = m.add_continuous("z", 0.0, 1.0);
  CHECK_THROWS_AS(relax_bilinear_dnmdt(m, z, x, y, 1, -0.1), ConfigError);
  CHECK_THROWS_AS(relax_bilinear_dnmdt(m, z, x, y, 1, 1.1), ConfigError);
}
