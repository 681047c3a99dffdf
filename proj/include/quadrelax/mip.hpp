// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "quadrelax/simplex.hpp"

namespace quadrelax {

struct MipResult {
  std::optional<Solution> incumbent;
  double dual_bound = 0.0;  // valid lower bound regardless of termination cause
  long node_count = 0;
  SolveStatus status = SolveStatus::LimitReached;
  std::vector<VarId> branch_sequence;  // branching variables in node order
};

// Best-bound branch and bound over LP relaxations. Branches on the most
// fractional binary (ties by lowest variable index).
MipResult solve_mip(const MipModel& model, const SolveLimits& limits = {});

}  // namespace quadrelax
