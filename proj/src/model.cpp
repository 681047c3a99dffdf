// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/model.hpp"

#include <algorithm>
#include <map>

namespace quadrelax {

void LinExpr::compact() {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<VarId, double>> merged;
  merged.reserve(terms.size());
  for (const auto& [v, c] : terms) {
    if (!merged.empty() && merged.back().first == v) {
      merged.back().second += c;
    } else {
      merged.emplace_back(v, c);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& t) { return t.second == 0.0; }),
               merged.end());
  terms = std::move(merged);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::LimitReached: return "limit";
  }
  return "?";
}

VarId MipModel::add_var(std::string name, VarKind kind, double lo, double hi) {
  if (kind == VarKind::Binary) {
    lo = 0.0;
    hi = 1.0;
  }
  vars_.push_back(Variable{std::move(name), kind, Interval{lo, hi}});
  return static_cast<VarId>(vars_.size() - 1);
}

int MipModel::add_row(LinExpr expr, RowSense sense, double rhs, std::string name) {
  expr.compact();
  Row r;
  r.coeffs = std::move(expr.terms);
  r.sense = sense;
  r.rhs = rhs - expr.constant;
  r.name = std::move(name);
  rows_.push_back(std::move(r));
  return static_cast<int>(rows_.size() - 1);
}

void MipModel::set_objective_coeff(VarId v, double c) {
  for (auto& [var, coeff] : obj_) {
    if (var == v) {
      coeff = c;
      return;
    }
  }
  obj_.emplace_back(v, c);
}

void MipModel::add_objective(const LinExpr& e, double scale) {
  for (const auto& [v, c] : e.terms) {
    bool found = false;
    for (auto& [var, coeff] : obj_) {
      if (var == v) {
        coeff += scale * c;
        found = true;
        break;
      }
    }
    if (!found) obj_.emplace_back(v, scale * c);
  }
  obj_constant_ += scale * e.constant;
}

int MipModel::num_binaries() const {
  int n = 0;
  for (const auto& v : vars_) n += v.kind == VarKind::Binary;
  return n;
}

double MipModel::objective_value(const std::vector<double>& x) const {
  double v = obj_constant_;
  for (const auto& [var, c] : obj_) v += c * x[var];
  return v;
}

double MipModel::row_activity(int i, const std::vector<double>& x) const {
  double a = 0.0;
  for (const auto& [var, c] : rows_[i].coeffs) a += c * x[var];
  return a;
}

double MipModel::row_violation(int i, const std::vector<double>& x) const {
  const double a = row_activity(i, x);
  const Row& r = rows_[i];
  switch (r.sense) {
    case RowSense::LE: return std::max(0.0, a - r.rhs);
    case RowSense::GE: return std::max(0.0, r.rhs - a);
    case RowSense::EQ: return std::abs(a - r.rhs);
  }
  return 0.0;
}

double MipModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int i = 0; i < num_rows(); ++i) worst = std::max(worst, row_violation(i, x));
  for (int v = 0; v < num_vars(); ++v) {
    worst = std::max(worst, vars_[v].bounds.lo - x[v]);
    worst = std::max(worst, x[v] - vars_[v].bounds.hi);
  }
  return worst;
}

void MipModel::validate() const {
  for (int v = 0; v < num_vars(); ++v) {
    const Variable& var = vars_[v];
    if (!std::isfinite(var.bounds.lo) || !std::isfinite(var.bounds.hi))
      throw ValidationError("variable " + var.name + " has a non-finite bound");
    if (var.bounds.lo > var.bounds.hi)
      throw ValidationError("variable " + var.name + " has lo > hi");
    if (var.kind == VarKind::Binary && (var.bounds.lo < 0.0 || var.bounds.hi > 1.0))
      throw ValidationError("binary " + var.name + " not bounded by [0,1]");
  }
  auto check_terms = [&](const std::vector<std::pair<VarId, double>>& terms,
                         const std::string& where) {
    for (const auto& [v, c] : terms) {
      if (v < 0 || v >= num_vars())
        throw ValidationError(where + " references undeclared variable " + std::to_string(v));
      if (!std::isfinite(c)) throw ValidationError(where + " has a non-finite coefficient");
    }
  };
  for (int i = 0; i < num_rows(); ++i) {
    check_terms(rows_[i].coeffs, "row " + std::to_string(i));
    if (!std::isfinite(rows_[i].rhs))
      throw ValidationError("row " + std::to_string(i) + " has a non-finite rhs");
  }
  check_terms(obj_, "objective");
  if (!std::isfinite(obj_constant_)) throw ValidationError("objective constant is non-finite");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::McCormickOnly: return "mc";
    case Method::NMDT: return "nmdt";
    case Method::TNMDT: return "tnmdt";
    case Method::DNMDT: return "dnmdt";
    case Method::TDNMDT: return "tdnmdt";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "mc" || s == "mccormick") return Method::McCormickOnly;
  if (s == "nmdt") return Method::NMDT;
  if (s == "tnmdt") return Method::TNMDT;
  if (s == "dnmdt") return Method::DNMDT;
  if (s == "tdnmdt") return Method::TDNMDT;
  throw ConfigError("unknown method '" + s + "' (expected mc|nmdt|tnmdt|dnmdt|tdnmdt)");
}

bool method_is_tightened(Method m) { return m == Method::TNMDT || m == Method::TDNMDT; }

void RelaxConfig::validate() const {
  if (method != Method::McCormickOnly && L < 1) throw ConfigError("depth L must be >= 1");
  if (method_is_tightened(method) && L1 < L)
    throw ConfigError("tightening depth L1 must satisfy L1 >= L");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0,1]");
}

double QuadForm::evaluate(const std::vector<double>& x, const std::vector<double>& y) const {
  double v = b;
  for (const auto& t : q) v += t.coeff * x[t.i] * x[t.k];
  for (size_t i = 0; i < c.size(); ++i) v += c[i] * x[i];
  for (size_t i = 0; i < d.size(); ++i) v += d[i] * y[i];
  return v;
}

double MiqcqpInstance::max_constraint_violation(const std::vector<double>& x,
                                                const std::vector<double>& y) const {
  double worst = 0.0;
  for (const auto& g : constraints) worst = std::max(worst, g.evaluate(x, y));
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, bounds[i].lo - x[i]);
    worst = std::max(worst, x[i] - bounds[i].hi);
  }
  return worst;
}

bool MiqcqpInstance::is_feasible(const std::vector<double>& x, const std::vector<double>& y,
                                 double tol) const {
  return max_constraint_violation(x, y) <= tol;
}

void MiqcqpInstance::validate() const {
  if (static_cast<int>(bounds.size()) != n) throw ValidationError("bounds size != n");
  for (int i = 0; i < n; ++i) {
    if (!bounds[i].finite())
      throw NonFiniteBoundsError("continuous variable " + std::to_string(i + 1) +
                                 " has a non-finite bound");
    if (bounds[i].lo > bounds[i].hi)
      throw ValidationError("variable " + std::to_string(i + 1) + " has lo > hi");
  }
  auto check_form = [&](const QuadForm& f, const std::string& where) {
    if (static_cast<int>(f.c.size()) != n) throw ValidationError(where + ": c size != n");
    if (static_cast<int>(f.d.size()) != k) throw ValidationError(where + ": d size != k");
    for (const auto& t : f.q) {
      if (t.i < 0 || t.k < 0 || t.i >= n || t.k >= n || t.i > t.k)
        throw ValidationError(where + ": bad quadratic triplet indices");
      if (!std::isfinite(t.coeff)) throw ValidationError(where + ": non-finite coefficient");
    }
  };
  check_form(objective, "objective");
  for (size_t j = 0; j < constraints.size(); ++j)
    check_form(constraints[j], "constraint " + std::to_string(j + 1));
}

}  // namespace quadrelax
