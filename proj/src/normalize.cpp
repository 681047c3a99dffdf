// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/normalize.hpp"

#include <algorithm>
#include <map>

namespace quadrelax {

std::vector<double> AffineBackMap::apply(const std::vector<double>& x_hat) const {
  std::vector<double> x(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    x[i] = e.fixed ? e.value : e.scale * x_hat[e.scaled_index] + e.offset;
  }
  return x;
}

namespace {

QuadForm transform_form(const QuadForm& f, const AffineBackMap& map, int new_n) {
  QuadForm g;
  g.c.assign(new_n, 0.0);
  g.d = f.d;
  g.b = f.b;

  std::map<std::pair<int, int>, double> quad;
  for (const auto& t : f.q) {
    const auto& ei = map.entries[t.i];
    const auto& ek = map.entries[t.k];
    if (ei.fixed && ek.fixed) {
      g.b += t.coeff * ei.value * ek.value;
    } else if (ei.fixed) {
      g.c[ek.scaled_index] += t.coeff * ei.value * ek.scale;
      g.b += t.coeff * ei.value * ek.offset;
    } else if (ek.fixed) {
      g.c[ei.scaled_index] += t.coeff * ek.value * ei.scale;
      g.b += t.coeff * ek.value * ei.offset;
    } else {
      quad[{ei.scaled_index, ek.scaled_index}] += t.coeff * ei.scale * ek.scale;
      g.c[ei.scaled_index] += t.coeff * ei.scale * ek.offset;
      g.c[ek.scaled_index] += t.coeff * ek.scale * ei.offset;
      g.b += t.coeff * ei.offset * ek.offset;
    }
  }
  for (size_t i = 0; i < f.c.size(); ++i) {
    const auto& e = map.entries[i];
    if (e.fixed) {
      g.b += f.c[i] * e.value;
    } else {
      g.c[e.scaled_index] += f.c[i] * e.scale;
      g.b += f.c[i] * e.offset;
    }
  }
  for (const auto& [ik, coeff] : quad) {
    if (coeff != 0.0) g.q.push_back(QuadTriplet{ik.first, ik.second, coeff});
  }
  return g;
}

}  // namespace

NormalizedInstance normalize_instance(const MiqcqpInstance& inst) {
  inst.validate();

  NormalizedInstance out;
  AffineBackMap& map = out.back_map;
  map.entries.resize(inst.n);
  int new_n = 0;
  for (int i = 0; i < inst.n; ++i) {
    const Interval& b = inst.bounds[i];
    AffineBackMap::Entry& e = map.entries[i];
    if (b.lo == b.hi) {
      e.fixed = true;
      e.value = b.lo;
    } else {
      e.scaled_index = new_n++;
      e.scale = b.width();
      e.offset = b.lo;
    }
  }

  MiqcqpInstance& norm = out.instance;
  norm.n = new_n;
  norm.k = inst.k;
  norm.bounds.assign(new_n, Interval{0.0, 1.0});
  norm.objective = transform_form(inst.objective, map, new_n);
  norm.constraints.reserve(inst.constraints.size());
  for (const auto& g : inst.constraints) norm.constraints.push_back(transform_form(g, map, new_n));
  return out;
}

std::vector<TermUse> collect_quadratic_terms(const MiqcqpInstance& inst) {
  std::map<std::pair<int, int>, TermUse> terms;
  auto accumulate = [&](const QuadForm& f, int con_index) {
    std::map<std::pair<int, int>, double> local;
    for (const auto& t : f.q) local[{t.i, t.k}] += t.coeff;
    for (const auto& [ik, coeff] : local) {
      if (coeff == 0.0) continue;
      TermUse& u = terms[ik];
      u.i = ik.first;
      u.k = ik.second;
      if (con_index < 0) {
        u.obj_coeff += coeff;
      } else {
        u.con_coeffs.emplace_back(con_index, coeff);
      }
    }
  };
  accumulate(inst.objective, -1);
  for (size_t j = 0; j < inst.constraints.size(); ++j)
    accumulate(inst.constraints[j], static_cast<int>(j));

  std::vector<TermUse> out;
  out.reserve(terms.size());
  for (auto& [ik, u] : terms) out.push_back(std::move(u));
  return out;
}

}  // namespace quadrelax
