// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "quadrelax/model.hpp"

namespace quadrelax {

struct RecoveryResult {
  std::vector<double> x;
  std::vector<double> y;
  double objective = 0.0;
  double max_violation = 0.0;
  bool feasible = false;  // max_violation <= 1e-6
};

// Best-effort primal polish for the original MIQCQP: fixes the original
// binaries to rounded relaxation values, then runs projected coordinate
// descent on a quadratic-penalty merit function (penalty weight doubling,
// at most 20 sweeps) from the relaxation's continuous point.
RecoveryResult primal_recovery(const MiqcqpInstance& inst, const std::vector<double>& x_start,
                               const std::vector<double>& y_start);

// |primal - dual| / max(|primal|, 1e-10), minimization orientation.
double compute_gap(double primal, double dual);

}  // namespace quadrelax
