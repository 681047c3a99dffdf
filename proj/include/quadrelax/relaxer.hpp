// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>

#include "quadrelax/dnmdt.hpp"
#include "quadrelax/model.hpp"
#include "quadrelax/nmdt.hpp"
#include "quadrelax/normalize.hpp"

namespace quadrelax {

// Shared per-variable machinery: one digit vector per discretized variable,
// one sawtooth record per tightened square.
struct VarDiscretization {
  DigitRecord digits;
  std::vector<VarId> sawtooth_g;
  std::vector<VarId> sawtooth_alpha;  // the epigraph relaxation is binary-free
};

struct TermRecord {
  int i = 0, k = 0;            // normalized-instance variable indices, i <= k
  VarId z = kInvalidVar;       // auxiliary carrying the term's value
  int discretized = -1;        // NMDT bilinear: which side carries the digits
  std::vector<VarId> u, v;
  VarId delta_z = kInvalidVar;
};

struct TermMap {
  std::vector<TermRecord> terms;
  std::map<int, VarDiscretization> per_var;

  const TermRecord* find(int i, int k) const {
    for (const auto& t : terms)
      if (t.i == i && t.k == k) return &t;
    return nullptr;
  }
};

struct ModelCounts {
  long binaries = 0;  // digit binaries only (original binaries not counted)
  long rows = 0;
};

struct RelaxationResult {
  MipModel model;
  TermMap term_map;
  AffineBackMap back_map;
  ModelCounts predicted_counts;
  ModelCounts actual_counts;
  RelaxConfig config;
  MiqcqpInstance normalized;
  std::vector<VarId> x_vars;  // model ids of the normalized continuous variables
  std::vector<VarId> y_vars;  // model ids of the original binaries

  // Maps a relaxation-model solution back to original coordinates.
  std::vector<double> original_x(const std::vector<double>& model_values) const;
  std::vector<double> original_y(const std::vector<double>& model_values) const;
};

// Normalize, collect terms, allocate shared discretizations, emit per-term
// fragments and substitute the auxiliaries into objective and constraints.
RelaxationResult build_relaxation(const MiqcqpInstance& inst, const RelaxConfig& cfg);

// Closed-form size predictions for a completely dense instance; advisory (the
// row-counting convention is not pinned by the underlying analysis).
ModelCounts predict_counts(int n, const RelaxConfig& cfg);

// The constructive witness that an instance point extends into the relaxation:
// digits from the truncated binary expansion, exact products, sawtooth values.
std::vector<double> canonical_extension(const RelaxationResult& r, const std::vector<double>& x_hat,
                                        const std::vector<double>& y);

struct ValidationReport {
  int samples_checked = 0;
  double worst_violation = 0.0;
};

// Samples instance-feasible points, extends each canonically and asserts model
// feasibility within 1e-8. Throws ValidationFailure with the offending point.
ValidationReport validate_relaxation(const MiqcqpInstance& inst, const RelaxationResult& r,
                                     int samples, uint64_t seed);

}  // namespace quadrelax
