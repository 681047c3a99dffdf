// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/relaxer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "quadrelax/envelopes.hpp"
#include "quadrelax/sawtooth.hpp"

namespace quadrelax {

namespace {

// Variables that carry digits. NMDT discretizes every squared variable plus a
// greedy vertex cover of the bilinear product graph (each product needs at
// least one discretized endpoint); D-NMDT discretizes every variable that
// appears in a quadratic term.
std::set<int> discretized_variables(const std::vector<TermUse>& terms, Method method) {
  std::set<int> chosen;
  if (method == Method::McCormickOnly) return chosen;

  if (method == Method::DNMDT || method == Method::TDNMDT) {
    for (const auto& t : terms) {
      chosen.insert(t.i);
      chosen.insert(t.k);
    }
    return chosen;
  }

  for (const auto& t : terms) {
    if (t.i == t.k) chosen.insert(t.i);
  }
  std::vector<std::pair<int, int>> uncovered;
  for (const auto& t : terms) {
    if (t.i != t.k && !chosen.count(t.i) && !chosen.count(t.k)) uncovered.emplace_back(t.i, t.k);
  }
  while (!uncovered.empty()) {
    std::map<int, int> degree;
    for (const auto& [i, k] : uncovered) {
      ++degree[i];
      ++degree[k];
    }
    int best = -1, best_deg = 0;
    for (const auto& [v, deg] : degree) {
      if (deg > best_deg) {
        best = v;
        best_deg = deg;
      }
    }
    chosen.insert(best);
    uncovered.erase(std::remove_if(uncovered.begin(), uncovered.end(),
                                   [&](const auto& e) {
                                     return e.first == best || e.second == best;
                                   }),
                    uncovered.end());
  }
  return chosen;
}

}  // namespace

std::vector<double> RelaxationResult::original_x(const std::vector<double>& model_values) const {
  std::vector<double> x_hat(x_vars.size());
  for (size_t i = 0; i < x_vars.size(); ++i) x_hat[i] = model_values[x_vars[i]];
  return back_map.apply(x_hat);
}

std::vector<double> RelaxationResult::original_y(const std::vector<double>& model_values) const {
  std::vector<double> y(y_vars.size());
  for (size_t j = 0; j < y_vars.size(); ++j) y[j] = model_values[y_vars[j]];
  return y;
}

ModelCounts predict_counts(int n, const RelaxConfig& cfg) {
  ModelCounts c;
  if (n <= 0) return c;
  const long nl = static_cast<long>(n);
  const long L = cfg.L;
  switch (cfg.method) {
    case Method::McCormickOnly:
      c.rows = 3 * nl + 2 * nl * (nl - 1);
      return c;
    case Method::NMDT:
    case Method::TNMDT:
      c.binaries = nl * L;
      c.rows = static_cast<long>(nl * (0.5 * (5.0 * nl + 7.0) + 2.0 * (nl + 1.0) * L));
      break;
    case Method::DNMDT:
    case Method::TDNMDT:
      c.binaries = nl * L;
      c.rows = static_cast<long>(nl * (0.5 * (5.0 * nl + 5.0) + 4.0 * nl * L));
      break;
  }
  if (method_is_tightened(cfg.method)) c.rows += nl * (3L * cfg.L1 + 4);
  return c;
}

RelaxationResult build_relaxation(const MiqcqpInstance& inst, const RelaxConfig& cfg) {
  cfg.validate();
  NormalizedInstance norm = normalize_instance(inst);
  const MiqcqpInstance& ni = norm.instance;
  const std::vector<TermUse> terms = collect_quadratic_terms(ni);

  RelaxationResult r;
  r.config = cfg;
  r.back_map = norm.back_map;
  r.normalized = ni;
  MipModel& m = r.model;

  for (int i = 0; i < ni.n; ++i)
    r.x_vars.push_back(m.add_continuous("x" + std::to_string(i + 1), 0.0, 1.0));
  for (int j = 0; j < ni.k; ++j) r.y_vars.push_back(m.add_binary("y" + std::to_string(j + 1)));

  const std::set<int> cover = discretized_variables(terms, cfg.method);
  for (int i : cover) {
    VarDiscretization& d = r.term_map.per_var[i];
    d.digits = make_digits(m, r.x_vars[i], cfg.L);
  }

  for (const auto& t : terms) {
    TermRecord rec;
    rec.i = t.i;
    rec.k = t.k;
    const std::string zname = t.i == t.k
                                  ? "z" + std::to_string(t.i + 1) + "sq"
                                  : "z" + std::to_string(t.i + 1) + "_" + std::to_string(t.k + 1);
    rec.z = m.add_continuous(zname, 0.0, 1.0);
    const VarId xi = r.x_vars[t.i];
    const VarId xk = r.x_vars[t.k];

    if (t.i == t.k) {
      switch (cfg.method) {
        case Method::McCormickOnly:
          square_envelope(m, xi, rec.z);
          break;
        case Method::NMDT: {
          NmdtFragment f = relax_square_nmdt(m, rec.z, xi, r.term_map.per_var.at(t.i).digits);
          rec.u = f.u;
          rec.delta_z = f.delta_z;
          rec.discretized = t.i;
          break;
        }
        case Method::TNMDT: {
          NmdtFragment f =
              relax_square_tnmdt(m, rec.z, xi, r.term_map.per_var.at(t.i).digits, cfg.L1);
          rec.u = f.u;
          rec.delta_z = f.delta_z;
          rec.discretized = t.i;
          r.term_map.per_var.at(t.i).sawtooth_g = f.epigraph_g;
          break;
        }
        case Method::DNMDT: {
          DnmdtFragment f = relax_square_dnmdt(m, rec.z, xi, r.term_map.per_var.at(t.i).digits);
          rec.u = f.u;
          rec.delta_z = f.delta_z;
          rec.discretized = t.i;
          break;
        }
        case Method::TDNMDT: {
          DnmdtFragment f =
              relax_square_tdnmdt(m, rec.z, xi, r.term_map.per_var.at(t.i).digits, cfg.L1);
          rec.u = f.u;
          rec.delta_z = f.delta_z;
          rec.discretized = t.i;
          r.term_map.per_var.at(t.i).sawtooth_g = f.epigraph_g;
          break;
        }
      }
    } else {
      switch (cfg.method) {
        case Method::McCormickOnly:
          bilinear_envelope(m, xi, xk, rec.z);
          break;
        case Method::NMDT:
        case Method::TNMDT: {
          const bool i_covered = cover.count(t.i) > 0;
          rec.discretized = i_covered ? t.i : t.k;
          const int other = i_covered ? t.k : t.i;
          NmdtFragment f =
              relax_bilinear_nmdt(m, rec.z, r.x_vars[rec.discretized], r.x_vars[other],
                                  r.term_map.per_var.at(rec.discretized).digits);
          rec.u = f.u;
          rec.delta_z = f.delta_z;
          break;
        }
        case Method::DNMDT:
        case Method::TDNMDT: {
          DnmdtFragment f =
              relax_bilinear_dnmdt(m, rec.z, xi, xk, r.term_map.per_var.at(t.i).digits,
                                   r.term_map.per_var.at(t.k).digits, cfg.lambda);
          rec.u = f.u;
          rec.v = f.v;
          rec.delta_z = f.delta_z;
          break;
        }
      }
    }
    r.term_map.terms.push_back(std::move(rec));
  }

  // Objective and constraints pass through with each quadratic term replaced
  // by its auxiliary.
  LinExpr obj;
  for (int i = 0; i < ni.n; ++i) obj.add(r.x_vars[i], ni.objective.c[i]);
  for (int j = 0; j < ni.k; ++j) obj.add(r.y_vars[j], ni.objective.d[j]);
  obj.constant = ni.objective.b;
  for (size_t ti = 0; ti < terms.size(); ++ti) {
    if (terms[ti].obj_coeff != 0.0)
      obj.add(r.term_map.terms[ti].z, terms[ti].obj_coeff);
  }
  obj.compact();
  m.add_objective(obj);

  for (size_t j = 0; j < ni.constraints.size(); ++j) {
    const QuadForm& g = ni.constraints[j];
    LinExpr e;
    for (int i = 0; i < ni.n; ++i) e.add(r.x_vars[i], g.c[i]);
    for (int jj = 0; jj < ni.k; ++jj) e.add(r.y_vars[jj], g.d[jj]);
    for (size_t ti = 0; ti < terms.size(); ++ti) {
      for (const auto& [cj, coeff] : terms[ti].con_coeffs) {
        if (cj == static_cast<int>(j)) e.add(r.term_map.terms[ti].z, coeff);
      }
    }
    m.add_row(std::move(e), RowSense::LE, -g.b, "con" + std::to_string(j + 1));
  }

  for (const auto& [v, d] : r.term_map.per_var)
    r.actual_counts.binaries += static_cast<long>(d.digits.beta.size());
  r.actual_counts.rows = m.num_rows();
  r.predicted_counts = predict_counts(ni.n, cfg);
  m.validate();
  return r;
}

std::vector<double> canonical_extension(const RelaxationResult& r, const std::vector<double>& x_hat,
                                        const std::vector<double>& y) {
  const RelaxConfig& cfg = r.config;
  const int L = cfg.L;
  std::vector<double> vals(r.model.num_vars(), 0.0);

  for (size_t i = 0; i < r.x_vars.size(); ++i) vals[r.x_vars[i]] = x_hat[i];
  for (size_t j = 0; j < r.y_vars.size(); ++j) vals[r.y_vars[j]] = y[j];

  // Digits: truncated binary expansion, residual picks up the remainder.
  std::vector<double> delta(r.x_vars.size(), 0.0);
  for (const auto& [vi, disc] : r.term_map.per_var) {
    const double x = x_hat[vi];
    const long cells = 1L << L;
    long cell = std::min(static_cast<long>(std::floor(x * cells)), cells - 1);
    if (cell < 0) cell = 0;
    for (int j = 1; j <= L; ++j) vals[disc.digits.beta[j - 1]] = (cell >> (L - j)) & 1;
    delta[vi] = x - std::ldexp(static_cast<double>(cell), -L);
    vals[disc.digits.delta] = delta[vi];
    for (size_t j = 0; j < disc.sawtooth_g.size(); ++j)
      vals[disc.sawtooth_g[j]] = tooth_iterate(x, static_cast<int>(j));
    for (size_t j = 0; j < disc.sawtooth_alpha.size(); ++j)
      vals[disc.sawtooth_alpha[j]] = tooth_iterate(x, static_cast<int>(j)) >= 0.5 ? 1.0 : 0.0;
  }

  for (const auto& t : r.term_map.terms) {
    const double xi = x_hat[t.i];
    const double xk = x_hat[t.k];
    vals[t.z] = xi * xk;
    if (cfg.method == Method::McCormickOnly) continue;

    if (t.i == t.k) {
      const auto& disc = r.term_map.per_var.at(t.i);
      const bool doubly = cfg.method == Method::DNMDT || cfg.method == Method::TDNMDT;
      for (int j = 1; j <= L; ++j) {
        const double beta = vals[disc.digits.beta[j - 1]];
        vals[t.u[j - 1]] = doubly ? beta * (delta[t.i] + xi) : beta * xi;
      }
      vals[t.delta_z] = doubly ? delta[t.i] * delta[t.i] : delta[t.i] * xi;
    } else if (cfg.method == Method::NMDT || cfg.method == Method::TNMDT) {
      const int d = t.discretized;
      const int o = d == t.i ? t.k : t.i;
      const auto& disc = r.term_map.per_var.at(d);
      for (int j = 1; j <= L; ++j)
        vals[t.u[j - 1]] = vals[disc.digits.beta[j - 1]] * x_hat[o];
      vals[t.delta_z] = delta[d] * x_hat[o];
    } else {
      const double lam = cfg.lambda;
      const auto& di = r.term_map.per_var.at(t.i);
      const auto& dk = r.term_map.per_var.at(t.k);
      const double ey = lam * delta[t.k] + (1.0 - lam) * xk;
      const double ex = (1.0 - lam) * delta[t.i] + lam * xi;
      for (int j = 1; j <= L; ++j) {
        vals[t.u[j - 1]] = vals[di.digits.beta[j - 1]] * ey;
        vals[t.v[j - 1]] = vals[dk.digits.beta[j - 1]] * ex;
      }
      vals[t.delta_z] = delta[t.i] * delta[t.k];
    }
  }
  return vals;
}

ValidationReport validate_relaxation(const MiqcqpInstance& inst, const RelaxationResult& r,
                                     int samples, uint64_t seed) {
  const MiqcqpInstance& ni = r.normalized;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  (void)inst;

  ValidationReport report;
  const long max_attempts = 200L * samples + 1000;
  long attempts = 0;
  while (report.samples_checked < samples && attempts++ < max_attempts) {
    std::vector<double> x(ni.n), y(ni.k);
    for (int i = 0; i < ni.n; ++i) x[i] = unit(rng);
    for (int j = 0; j < ni.k; ++j) y[j] = unit(rng) < 0.5 ? 0.0 : 1.0;
    if (!ni.is_feasible(x, y, 1e-9)) continue;

    const std::vector<double> ext = canonical_extension(r, x, y);
    const double viol = r.model.max_violation(ext);
    report.worst_violation = std::max(report.worst_violation, viol);
    if (viol > 1e-8) {
      throw ValidationFailure("canonical extension violates the relaxation by " +
                                  std::to_string(viol),
                              x, viol);
    }
    ++report.samples_checked;
  }
  return report;
}

}  // namespace quadrelax
