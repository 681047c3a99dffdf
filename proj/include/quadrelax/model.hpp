// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "quadrelax/errors.hpp"

namespace quadrelax {

using VarId = int32_t;
inline constexpr VarId kInvalidVar = -1;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

enum class VarKind { Continuous, Binary };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  Interval bounds;
};

enum class RowSense { LE, EQ, GE };

// A sparse linear expression used while assembling rows: sum of coeff*var + constant.
struct LinExpr {
  std::vector<std::pair<VarId, double>> terms;
  double constant = 0.0;

  LinExpr() = default;
  explicit LinExpr(double c) : constant(c) {}
  LinExpr(VarId v, double coeff) { terms.emplace_back(v, coeff); }

  LinExpr& add(VarId v, double coeff) {
    terms.emplace_back(v, coeff);
    return *this;
  }
  LinExpr& add(const LinExpr& e, double scale = 1.0) {
    for (const auto& [v, c] : e.terms) terms.emplace_back(v, scale * c);
    constant += scale * e.constant;
    return *this;
  }
  // Merges duplicate variables and drops exact zeros.
  void compact();
};

inline LinExpr operator*(double s, const LinExpr& e) {
  LinExpr r(s * e.constant);
  for (const auto& [v, c] : e.terms) r.add(v, s * c);
  return r;
}

struct Row {
  std::vector<std::pair<VarId, double>> coeffs;  // compacted, sorted by var id
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
  std::string name;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, LimitReached };

const char* to_string(SolveStatus s);

struct Solution {
  std::vector<double> values;  // one per model variable
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::Infeasible;
};

// A mixed-binary linear model: the output of every relaxation builder and the
// input of the LP/MIP engine. Minimization only.
class MipModel {
 public:
  VarId add_var(std::string name, VarKind kind, double lo, double hi);
  VarId add_continuous(std::string name, double lo, double hi) {
    return add_var(std::move(name), VarKind::Continuous, lo, hi);
  }
  VarId add_binary(std::string name) { return add_var(std::move(name), VarKind::Binary, 0.0, 1.0); }

  // expr (sense) rhs; the expression's constant folds into the right-hand side.
  int add_row(LinExpr expr, RowSense sense, double rhs, std::string name = {});

  void set_objective_coeff(VarId v, double c);
  void add_objective(const LinExpr& e, double scale = 1.0);
  void set_objective_constant(double c) { obj_constant_ = c; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const;

  const Variable& var(VarId v) const { return vars_[v]; }
  Variable& var(VarId v) { return vars_[v]; }
  const Row& row(int i) const { return rows_[i]; }
  Row& row(int i) { return rows_[i]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }

  const std::vector<std::pair<VarId, double>>& objective_terms() const { return obj_; }
  double objective_constant() const { return obj_constant_; }

  double objective_value(const std::vector<double>& x) const;
  double row_activity(int i, const std::vector<double>& x) const;
  // Positive amount by which the row (or variable bound) is violated.
  double row_violation(int i, const std::vector<double>& x) const;
  double max_violation(const std::vector<double>& x) const;

  // Structural checks: declared variables, finite coefficients, binaries in [0,1].
  // Throws ValidationError on the first defect found.
  void validate() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<std::pair<VarId, double>> obj_;
  double obj_constant_ = 0.0;
};

enum class Method { McCormickOnly, NMDT, TNMDT, DNMDT, TDNMDT };

const char* to_string(Method m);
Method method_from_string(const std::string& s);  // throws ConfigError
bool method_is_tightened(Method m);

struct RelaxConfig {
  Method method = Method::DNMDT;
  int L = 1;
  int L1 = 1;
  double lambda = 0.5;

  void validate() const;  // throws ConfigError
};

// One quadratic term coefficient: coeff * x_i * x_k with i <= k. Off-diagonal
// coefficients are stored merged (q_ik + q_ki recorded once).
struct QuadTriplet {
  int i = 0;
  int k = 0;
  double coeff = 0.0;
};

// x'Qx + c'x + d'y + b, quadratic only in the continuous variables x.
struct QuadForm {
  std::vector<QuadTriplet> q;
  std::vector<double> c;  // size n
  std::vector<double> d;  // size k
  double b = 0.0;

  double evaluate(const std::vector<double>& x, const std::vector<double>& y) const;
};

// The problem: min obj(x, y) s.t. constraints(x, y) <= 0, x in box, y binary.
struct MiqcqpInstance {
  int n = 0;  // continuous variables
  int k = 0;  // original binary variables
  std::vector<Interval> bounds;  // size n
  QuadForm objective;
  std::vector<QuadForm> constraints;

  double objective_value(const std::vector<double>& x, const std::vector<double>& y) const {
    return objective.evaluate(x, y);
  }
  double max_constraint_violation(const std::vector<double>& x, const std::vector<double>& y) const;
  bool is_feasible(const std::vector<double>& x, const std::vector<double>& y, double tol) const;

  void validate() const;  // throws ValidationError / NonFiniteBoundsError
};

}  // namespace quadrelax
