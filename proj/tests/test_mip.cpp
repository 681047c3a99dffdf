// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadrelax/dnmdt.hpp"
#include "quadrelax/mip.hpp"
#include "quadrelax/recovery.hpp"
#include "quadrelax/simplex.hpp"

using namespace quadrelax;

namespace {

// Exhaustive binary enumeration: LP per fixing, best objective kept.
std::optional<double> brute_force_mip(const MipModel& m) {
  std::vector<VarId> binaries;
  for (int v = 0; v < m.num_vars(); ++v) {
    if (m.var(v).kind == VarKind::Binary) binaries.push_back(v);
  }
  std::optional<double> best;
  SimplexSolver solver(m);
  for (long mask = 0; mask < (1L << binaries.size()); ++mask) {
    solver.restore_all_bounds();
    for (size_t b = 0; b < binaries.size(); ++b) {
      const double v = (mask >> b) & 1;
      solver.set_var_bounds(binaries[b], v, v);
    }
    const LpResult lp = solver.solve();
    if (lp.status == LpStatus::Optimal && (!best || lp.objective < *best)) best = lp.objective;
  }
  return best;
}

MipModel random_mip(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> ncont(1, 4);
  std::uniform_int_distribution<int> nbin(1, 12);
  std::uniform_int_distribution<int> nrows(1, 6);
  MipModel m;
  const int nc = ncont(rng), nb = nbin(rng), nr = nrows(rng);
  for (int v = 0; v < nc; ++v) m.add_continuous("c" + std::to_string(v), -1.0, 1.0);
  for (int v = 0; v < nb; ++v) m.add_binary("b" + std::to_string(v));
  for (int r = 0; r < nr; ++r) {
    LinExpr e;
    double center = 0.0;
    for (int v = 0; v < m.num_vars(); ++v) {
      if (unit(rng) < 0.6) {
        const double c = coeff(rng);
        e.add(v, c);
        center += c * m.var(v).bounds.mid();
      }
    }
    m.add_row(std::move(e), unit(rng) < 0.8 ? RowSense::LE : RowSense::GE,
              center + coeff(rng) * 0.5);
  }
  for (int v = 0; v < m.num_vars(); ++v) m.set_objective_coeff(v, coeff(rng));
  return m;
}

}  // namespace

TEST_CASE("branch and bound matches binary enumeration on random models") {
  std::mt19937_64 rng(301);
  SolveLimits limits;
  limits.rel_gap = 1e-9;
  int feasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const MipModel m = random_mip(rng);
    const auto oracle = brute_force_mip(m);
    const MipResult res = solve_mip(m, limits);
    if (!oracle.has_value()) {
      CHECK_MESSAGE(res.status == SolveStatus::Infeasible, "trial ", trial);
      continue;
    }
    ++feasible;
    REQUIRE_MESSAGE(res.status == SolveStatus::Optimal, "trial ", trial);
    CHECK_MESSAGE(res.dual_bound <= *oracle + 1e-6, "trial ", trial);
    CHECK_MESSAGE(std::abs(res.incumbent->objective_value - *oracle) <= 1e-6, "trial ", trial,
                  " bb=", res.incumbent->objective_value, " brute=", *oracle);
  }
  CHECK(feasible > 15);
}

TEST_CASE("all binaries fixed solves at the root") {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 2.0);
  const VarId b = m.add_binary("b");
  m.var(b).bounds = Interval{1.0, 1.0};
  m.add_row(LinExpr(x, 1.0).add(b, 1.0), RowSense::GE, 1.5);
  m.set_objective_coeff(x, 1.0);
  const MipResult res = solve_mip(m);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.node_count == 1);
  CHECK(res.branch_sequence.empty());
  CHECK(res.incumbent->objective_value == doctest::Approx(0.5));
}

TEST_CASE("node limit of one returns the root dual bound") {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId b1 = m.add_binary("b1");
  const VarId b2 = m.add_binary("b2");
  // Force fractional binaries at the root.
  m.add_row(LinExpr(b1, 1.0).add(b2, 1.0), RowSense::EQ, 1.0);
  m.add_row(LinExpr(b1, 1.0).add(b2, -1.0).add(x, -1.0), RowSense::LE, 0.0);
  m.set_objective_coeff(b1, 1.0);
  m.set_objective_coeff(b2, 2.0);
  m.set_objective_coeff(x, 0.5);
  SolveLimits limits;
  limits.max_nodes = 1;
  const MipResult res = solve_mip(m, limits);
  CHECK(res.node_count == 1);
  CHECK((res.status == SolveStatus::LimitReached || res.status == SolveStatus::Feasible));
  CHECK(std::isfinite(res.dual_bound));
}

TEST_CASE("branching is deterministic across repeated runs") {
  std::mt19937_64 rng(77);
  const MipModel m = random_mip(rng);
  SolveLimits limits;
  limits.rel_gap = 1e-9;
  const MipResult a = solve_mip(m, limits);
  const MipResult b = solve_mip(m, limits);
  CHECK(a.node_count == b.node_count);
  CHECK(a.branch_sequence == b.branch_sequence);
  CHECK(a.dual_bound == b.dual_bound);
}

TEST_CASE("dual bound is valid under a tight node budget") {
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const MipModel m = random_mip(rng);
    const auto oracle = brute_force_mip(m);
    SolveLimits limits;
    limits.max_nodes = 3;
    const MipResult res = solve_mip(m, limits);
    if (oracle.has_value() && std::isfinite(res.dual_bound))
      CHECK(res.dual_bound <= *oracle + 1e-6);
  }
}

TEST_CASE("compute_gap follows the documented convention") {
  CHECK(compute_gap(5.0, 5.0) == doctest::Approx(0.0));
  CHECK(compute_gap(100.0, 99.0) == doctest::Approx(0.01));
  CHECK(compute_gap(0.0, -1e-12) == doctest::Approx(0.01));
}

TEST_CASE("primal recovery pulls a point into the feasible region") {
  // min x s.t. x^2 <= 0.25 over [-1, 1]: start at 0.6 (infeasible).
  MiqcqpInstance inst;
  inst.n = 1;
  inst.k = 0;
  inst.bounds = {Interval{-1.0, 1.0}};
  inst.objective.c = {1.0};
  QuadForm g;
  g.c = {0.0};
  g.q = {QuadTriplet{0, 0, 1.0}};
  g.b = -0.25;
  inst.constraints = {g};

  const RecoveryResult rec = primal_recovery(inst, {0.6}, {});
  CHECK(rec.feasible);
  CHECK(rec.max_violation <= 1e-6);
  CHECK(rec.x[0] >= -0.5 - 1e-6);
  CHECK(rec.x[0] <= 0.5 + 1e-6);
  // The descent should also have moved toward the minimizer x = -0.5.
  CHECK(rec.objective <= -0.49);
}

TEST_CASE("recovery reports violation honestly on infeasible instances") {
  MiqcqpInstance inst;
  inst.n = 1;
  inst.k = 0;
  inst.bounds = {Interval{0.0, 1.0}};
  inst.objective.c = {0.0};
  QuadForm g;  // x^2 + 1 <= 0 is unsatisfiable
  g.c = {0.0};
  g.q = {QuadTriplet{0, 0, 1.0}};
  g.b = 1.0;
  inst.constraints = {g};
  const RecoveryResult rec = primal_recovery(inst, {0.5}, {});
  CHECK(!rec.feasible);
  CHECK(rec.max_violation >= 1.0 - 1e-9);
}

TEST_CASE("boxQP recovery evaluates the objective at a box point") {
  const MiqcqpInstance inst = quadrelax::testing::random_boxqp(4, 0.8, 5);
  const RecoveryResult rec = primal_recovery(inst, {0.2, 0.8, 0.5, 0.1}, {});
  CHECK(rec.feasible);
  for (double xi : rec.x) {
    CHECK(xi >= -1e-12);
    CHECK(xi <= 1.0 + 1e-12);
  }
}
