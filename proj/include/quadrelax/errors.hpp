// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace quadrelax {

// Bad method parameters (L < 1, L1 < L, lambda outside [0,1], ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Instance has an infinite continuous-variable bound; unsupported.
struct NonFiniteBoundsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line(line) {}
  int line;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sampled feasible point failed to extend into the relaxation.
struct ValidationFailure : std::runtime_error {
  ValidationFailure(const std::string& what, std::vector<double> point_, double violation_)
      : std::runtime_error(what), point(std::move(point_)), violation(violation_) {}
  std::vector<double> point;
  double violation;
};

// LP pivoting stalled or produced an inconsistent basis.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quadrelax
