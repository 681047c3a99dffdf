// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadrelax/mip.hpp"
#include "quadrelax/relaxer.hpp"
#include "quadrelax/simplex.hpp"

using namespace quadrelax;

namespace {

MiqcqpInstance dense_boxqp(int n) {
  MiqcqpInstance inst;
  inst.n = n;
  inst.k = 0;
  inst.bounds.assign(n, Interval{0.0, 1.0});
  inst.objective.c.assign(n, -0.5);
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) {
      inst.objective.q.push_back(QuadTriplet{i, k, i == k ? 1.0 : -0.6});
    }
  }
  return inst;
}

RelaxConfig config(Method method, int L, int L1 = 0) {
  RelaxConfig cfg;
  cfg.method = method;
  cfg.L = L;
  cfg.L1 = L1 > 0 ? L1 : L;
  return cfg;
}

}  // namespace

TEST_CASE("a purely linear instance passes through as its own MILP") {
  MiqcqpInstance inst;
  inst.n = 2;
  inst.k = 1;
  inst.bounds = {Interval{0.0, 1.0}, Interval{0.0, 2.0}};
  inst.objective.c = {1.0, -1.0};
  inst.objective.d = {0.5};
  QuadForm g;
  g.c = {1.0, 1.0};
  g.d = {1.0};
  g.b = -2.0;
  inst.constraints = {g};

  const RelaxationResult r = build_relaxation(inst, config(Method::DNMDT, 2));
  CHECK(r.term_map.terms.empty());
  CHECK(r.actual_counts.binaries == 0);
  CHECK(r.model.num_vars() == 3);  // x1, x2, y1
  CHECK(r.model.num_rows() == 1);
}

TEST_CASE("dense D-NMDT at L=2, n=3: six digit binaries and six auxiliaries") {
  const MiqcqpInstance inst = dense_boxqp(3);
  const RelaxationResult r = build_relaxation(inst, config(Method::DNMDT, 2));
  CHECK(r.actual_counts.binaries == 6);  // nL
  CHECK(r.term_map.terms.size() == 6);   // 3 squares + 3 products
  CHECK(r.predicted_counts.binaries == 6);
}

TEST_CASE("digit binaries equal nL for NMDT (full cover) and D-NMDT on dense instances") {
  for (int n : {2, 3, 4}) {
    for (int L : {1, 2}) {
      const MiqcqpInstance inst = dense_boxqp(n);
      for (Method method : {Method::NMDT, Method::DNMDT}) {
        const RelaxationResult r = build_relaxation(inst, config(method, L));
        CHECK_MESSAGE(r.actual_counts.binaries == static_cast<long>(n) * L, "n=", n, " L=", L,
                      " method=", to_string(method));
      }
    }
  }
}

TEST_CASE("Table-style count predictions") {
  // n=2, L=1: NMDT 2(17/2 + 6) = 29 rows; D-NMDT 2(15/2 + 8) = 31 rows.
  CHECK(predict_counts(2, config(Method::NMDT, 1)).rows == 29);
  CHECK(predict_counts(2, config(Method::NMDT, 1)).binaries == 2);
  CHECK(predict_counts(2, config(Method::DNMDT, 1)).rows == 31);
  CHECK(predict_counts(2, config(Method::DNMDT, 1)).binaries == 2);
  CHECK(predict_counts(0, config(Method::NMDT, 1)).rows == 0);
  CHECK(predict_counts(0, config(Method::NMDT, 1)).binaries == 0);
}

TEST_CASE("NMDT discretizes a bipartite side only") {
  // Terms x0*x2, x0*x3, x1*x2, x1*x3: covering {x0, x1} suffices.
  MiqcqpInstance inst;
  inst.n = 4;
  inst.k = 0;
  inst.bounds.assign(4, Interval{0.0, 1.0});
  inst.objective.c.assign(4, 0.0);
  inst.objective.q = {QuadTriplet{0, 2, 1.0}, QuadTriplet{0, 3, 1.0}, QuadTriplet{1, 2, 1.0},
                      QuadTriplet{1, 3, 1.0}};
  const RelaxationResult r = build_relaxation(inst, config(Method::NMDT, 3));
  CHECK(r.actual_counts.binaries == 2 * 3);  // 2L * min{m, n}
  CHECK(r.term_map.per_var.size() == 2);
}

TEST_CASE("mccormick-only relaxation has no binaries and one envelope per term") {
  const MiqcqpInstance inst = dense_boxqp(3);
  const RelaxationResult r = build_relaxation(inst, config(Method::McCormickOnly, 1));
  CHECK(r.actual_counts.binaries == 0);
  // 3 squares (3 rows each) + 3 products (4 rows each).
  CHECK(r.model.num_rows() == 3 * 3 + 3 * 4);
}

TEST_CASE("sampled feasible points always extend into the relaxation") {
  for (int tcase = 0; tcase < 6; ++tcase) {
    MiqcqpInstance inst = quadrelax::testing::random_boxqp(3, 0.8, 1000 + tcase);
    // One quadratic constraint to exercise constrained sampling.
    QuadForm g;
    g.c.assign(3, 0.1);
    g.q = {QuadTriplet{0, 0, 1.0}, QuadTriplet{1, 2, 0.5}};
    g.b = -1.2;
    inst.constraints = {g};

    for (Method method :
         {Method::McCormickOnly, Method::NMDT, Method::TNMDT, Method::DNMDT, Method::TDNMDT}) {
      const RelaxConfig cfg = config(method, 2, 3);
      const RelaxationResult r = build_relaxation(inst, cfg);
      const ValidationReport report = validate_relaxation(inst, r, 200, 42);
      CHECK(report.samples_checked == 200);
      CHECK(report.worst_violation <= 1e-8);
    }
  }
}

TEST_CASE("a corrupted envelope row trips validation") {
  const MiqcqpInstance inst = dense_boxqp(2);
  RelaxationResult r = build_relaxation(inst, config(Method::NMDT, 1));
  for (int i = 0; i < r.model.num_rows(); ++i) {
    if (r.model.row(i).sense == RowSense::LE) {
      r.model.row(i).sense = RowSense::GE;
      break;
    }
  }
  CHECK_THROWS_AS(validate_relaxation(inst, r, 100, 7), ValidationFailure);
}

TEST_CASE("constrained instances sample inside the feasible region") {
  // Box [-1,1] with x^2 <= 0.25: feasible x in [-0.5, 0.5].
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
  const RelaxationResult r = build_relaxation(inst, config(Method::TDNMDT, 1, 2));
  const ValidationReport report = validate_relaxation(inst, r, 150, 9);
  CHECK(report.samples_checked == 150);
  CHECK(report.worst_violation <= 1e-8);
}

TEST_CASE("relaxation optimum stays below the brute-force minimum") {
  SolveLimits limits;
  limits.rel_gap = 1e-9;
  for (int seed : {1, 2, 3}) {
    const MiqcqpInstance inst = quadrelax::testing::random_boxqp(3, 1.0, seed);
    const double truth = quadrelax::testing::grid_minimum(inst, 41);
    for (Method method : {Method::McCormickOnly, Method::NMDT, Method::DNMDT}) {
      const RelaxationResult r = build_relaxation(inst, config(method, 2));
      const MipResult res = solve_mip(r.model, limits);
      REQUIRE(res.status == SolveStatus::Optimal);
      CHECK_MESSAGE(res.dual_bound <= truth + 1e-6, "method=", to_string(method),
                    " seed=", seed);
    }
  }
}

TEST_CASE("dual bounds tighten monotonically in depth and with tightening") {
  SolveLimits limits;
  limits.rel_gap = 1e-9;
  for (int seed : {11, 12}) {
    const MiqcqpInstance inst = quadrelax::testing::random_boxqp(3, 1.0, seed);
    for (Method method : {Method::NMDT, Method::DNMDT}) {
      double prev = -1e100;
      for (int L : {1, 2, 3}) {
        const MipResult res = solve_mip(build_relaxation(inst, config(method, L)).model, limits);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK_MESSAGE(res.dual_bound >= prev - 1e-8, "L=", L, " method=", to_string(method));
        prev = res.dual_bound;
      }
    }
    const MipResult plain =
        solve_mip(build_relaxation(inst, config(Method::DNMDT, 2)).model, limits);
    const MipResult tight =
        solve_mip(build_relaxation(inst, config(Method::TDNMDT, 2, 2)).model, limits);
    CHECK(tight.dual_bound >= plain.dual_bound - 1e-8);
  }
}

TEST_CASE("identical inputs produce structurally identical models") {
  const MiqcqpInstance inst = dense_boxqp(3);
  const RelaxationResult a = build_relaxation(inst, config(Method::TDNMDT, 2, 3));
  const RelaxationResult b = build_relaxation(inst, config(Method::TDNMDT, 2, 3));
  REQUIRE(a.model.num_vars() == b.model.num_vars());
  REQUIRE(a.model.num_rows() == b.model.num_rows());
  for (int v = 0; v < a.model.num_vars(); ++v) {
    CHECK(a.model.var(v).name == b.model.var(v).name);
    CHECK(a.model.var(v).kind == b.model.var(v).kind);
  }
  for (int i = 0; i < a.model.num_rows(); ++i) {
    CHECK(a.model.row(i).coeffs == b.model.row(i).coeffs);
    CHECK(a.model.row(i).rhs == b.model.row(i).rhs);
  }
}

TEST_CASE("back-mapped solutions preserve objective values") {
  MiqcqpInstance inst;
  inst.n = 2;
  inst.k = 0;
  inst.bounds = {Interval{-2.0, 3.0}, Interval{1.0, 4.0}};
  inst.objective.c = {0.3, -0.7};
  inst.objective.q = {QuadTriplet{0, 0, 1.0}, QuadTriplet{0, 1, -1.0}};
  const RelaxationResult r = build_relaxation(inst, config(Method::DNMDT, 2));

  const std::vector<double> x_hat = {0.37, 0.81};
  const std::vector<double> ext = canonical_extension(r, x_hat, {});
  const std::vector<double> x_orig = r.original_x(ext);
  CHECK(x_orig[0] == doctest::Approx(-2.0 + 5.0 * 0.37));
  CHECK(x_orig[1] == doctest::Approx(1.0 + 3.0 * 0.81));
  CHECK(r.normalized.objective.evaluate(x_hat, {}) ==
        doctest::Approx(inst.objective.evaluate(x_orig, {})).epsilon(1e-12));
}
