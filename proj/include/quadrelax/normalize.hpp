// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "quadrelax/model.hpp"

namespace quadrelax {

// Affine map from normalized ([0,1]-box) coordinates back to the original
// variables. Variables with lo == hi are substituted out before relaxation and
// reappear here as fixed values.
struct AffineBackMap {
  struct Entry {
    bool fixed = false;
    double value = 0.0;   // fixed value when fixed
    int scaled_index = -1;  // index into the normalized x vector otherwise
    double scale = 1.0;   // x_orig = scale * x_hat + offset
    double offset = 0.0;
  };
  std::vector<Entry> entries;  // one per original continuous variable

  std::vector<double> apply(const std::vector<double>& x_hat) const;
};

struct NormalizedInstance {
  MiqcqpInstance instance;  // all continuous bounds are [0,1]
  AffineBackMap back_map;
};

// Rewrites the instance over the unit box via x = scale*x_hat + offset.
// Throws NonFiniteBoundsError when a continuous bound is infinite.
NormalizedInstance normalize_instance(const MiqcqpInstance& inst);

// A quadratic term (i,k), i <= k, with its coefficient in the objective and in
// each constraint that uses it.
struct TermUse {
  int i = 0;
  int k = 0;
  double obj_coeff = 0.0;
  std::vector<std::pair<int, double>> con_coeffs;  // (constraint index, coefficient)
};

// Deterministic (i <= k, lexicographic) union of the quadratic terms appearing
// anywhere in the instance; duplicate triplets merge and zero coefficients drop.
std::vector<TermUse> collect_quadratic_terms(const MiqcqpInstance& inst);

}  // namespace quadrelax
