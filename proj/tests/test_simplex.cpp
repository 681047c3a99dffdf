// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadrelax/envelopes.hpp"
#include "quadrelax/simplex.hpp"

using namespace quadrelax;

TEST_CASE("maximizing z over the unit-box McCormick set reaches the corner") {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId y = m.add_continuous("y", 0.0, 1.0);
  const VarId z = m.add_continuous("z", -1.0, 2.0);
  bilinear_envelope(m, x, y, z);
  m.set_objective_coeff(z, -1.0);
  const Solution sol = solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(sol.values[x] == doctest::Approx(1.0));
  CHECK(sol.values[y] == doctest::Approx(1.0));
  CHECK(sol.values[z] == doctest::Approx(1.0));
}

TEST_CASE("conflicting rows are reported infeasible") {
  MipModel m;
  const VarId x = m.add_continuous("x", -10.0, 10.0);
  m.add_row(LinExpr(x, 1.0), RowSense::GE, 1.0);
  m.add_row(LinExpr(x, 1.0), RowSense::LE, 0.0);
  CHECK(solve_lp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("equality rows and degenerate bounds") {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId y = m.add_continuous("y", 0.0, 1.0);
  m.add_row(LinExpr(x, 1.0).add(y, 1.0), RowSense::EQ, 1.0);
  m.set_objective_coeff(x, 1.0);
  const Solution sol = solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.values[y] == doctest::Approx(1.0));
}

TEST_CASE("warm-started probes after bound changes stay correct") {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId y = m.add_continuous("y", 0.0, 1.0);
  const VarId z = m.add_continuous("z", -1.0, 2.0);
  bilinear_envelope(m, x, y, z);
  SimplexSolver solver(m);
  for (int t = 0; t <= 16; ++t) {
    const double xv = t / 16.0;
    solver.set_var_bounds(x, xv, xv);
    solver.set_objective({{z, 1.0}});
    LpResult lo = solver.solve();
    REQUIRE(lo.status == LpStatus::Optimal);
    solver.set_objective({{z, -1.0}});
    LpResult hi = solver.solve();
    REQUIRE(hi.status == LpStatus::Optimal);
    // With y free in [0,1], min z sits at y=0 (z=0) and max z at y=1 (z=x).
    CHECK(lo.objective == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(-hi.objective == doctest::Approx(xv).epsilon(1e-8));
  }
}

TEST_CASE("LP agrees with brute-force vertex enumeration on random models") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> nvars(2, 6);
  std::uniform_int_distribution<int> nrows(1, 8);

  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    MipModel m;
    const int n = nvars(rng);
    const int rows = nrows(rng);
    for (int v = 0; v < n; ++v) {
      const double lo = coeff(rng);
      m.add_continuous("v" + std::to_string(v), lo, lo + 0.1 + unit(rng) * 2.0);
    }
    for (int r = 0; r < rows; ++r) {
      LinExpr e;
      double center = 0.0;
      for (int v = 0; v < n; ++v) {
        if (unit(rng) < 0.7) {
          const double c = coeff(rng);
          e.add(v, c);
          center += c * m.var(v).bounds.mid();
        }
      }
      const int sense = static_cast<int>(unit(rng) * 3);
      const double rhs = center + coeff(rng) * 0.5;
      m.add_row(std::move(e),
                sense == 0 ? RowSense::LE : (sense == 1 ? RowSense::GE : RowSense::EQ), rhs);
    }
    for (int v = 0; v < n; ++v) m.set_objective_coeff(v, coeff(rng));

    const auto oracle = quadrelax::testing::lp_vertex_enumeration(m);
    const Solution sol = solve_lp(m);
    if (!oracle.has_value()) {
      CHECK_MESSAGE(sol.status == SolveStatus::Infeasible, "trial ", trial);
      continue;
    }
    ++solved;
    REQUIRE_MESSAGE(sol.status == SolveStatus::Optimal, "trial ", trial);
    const double scale = std::max(1.0, std::abs(*oracle));
    CHECK_MESSAGE(std::abs(sol.objective_value - *oracle) <= 1e-6 * scale, "trial ", trial,
                  " lp=", sol.objective_value, " oracle=", *oracle);
  }
  CHECK(solved > 50);
}

TEST_CASE("objective constants pass through") {
  MipModel m;
  const VarId x = m.add_continuous("x", 2.0, 3.0);
  m.set_objective_coeff(x, 1.0);
  m.set_objective_constant(10.0);
  const Solution sol = solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(12.0));
}
