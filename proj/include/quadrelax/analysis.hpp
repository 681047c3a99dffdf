// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "quadrelax/model.hpp"

namespace quadrelax {

// The projected sets whose error against the quadratic graph is analyzed.
enum class ErrorSurface {
  McCormickBilinear,
  McCormickSquare,
  NmdtBilinear,
  NmdtSquare,
  DnmdtBilinear,
  DnmdtSquare,
  SawtoothEpigraph,
};

const char* to_string(ErrorSurface s);

// Closed-form maximum pointwise error of the MIP relaxation at depth L:
//   NMDT bilinear   2^{-L-2}
//   D-NMDT bilinear 2^{-2L-2}
//   D-NMDT square   2^{-2L-2}
//   NMDT square     2^{-L-2} - 2^{-3L-2} (1 + 2^{-L})^{-2}
//   epigraph        2^{-2L-4}
double max_error_theoretical(ErrorSurface s, int L);

// Brute force over digit patterns: analytic per-piece McCormick maxima for the
// bilinear surfaces, per-piece grid maximization for the univariate NMDT gap,
// fixed-x LP probes on a dyadic grid for the sawtooth epigraph.
double max_error_empirical(ErrorSurface s, int L, long resolution = 100000);

// Under- and overestimation maxima of univariate NMDT probed separately; the
// overestimation side has its own closed form (special-cased at L = 1).
struct UnivariateNmdtErrorSplit {
  double under_empirical = 0.0;
  double over_empirical = 0.0;
  double under_theory = 0.0;
  double over_theory = 0.0;
};
UnivariateNmdtErrorSplit univariate_nmdt_error_split(int L, long resolution = 100000);

// Largest fixed-x gap x^2 - min y over the depth-L epigraph relaxation,
// probed by LP solves on a uniform dyadic grid with `grid_cells` cells.
double ser_empirical_max_gap(int L, long grid_cells);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long samples = 0;
};

// Volume of the projected MIP relaxation minus the graph, estimated by the
// average vertical width at uniformly sampled points.
MonteCarloEstimate avg_width_empirical(ErrorSurface s, int L, long samples, uint64_t seed);

// Table-backed closed forms; NaN where the underlying analysis omits the value
// (univariate NMDT).
double avg_width_theoretical(ErrorSurface s, int L);

// Volume of the projected *LP* relaxation of y = x^2 (binaries relaxed):
// per sampled x, LP-min and LP-max of y accumulate the width.
MonteCarloEstimate lp_volume_univariate(Method method, int L, long samples, uint64_t seed);

struct SharpnessCounterexample {
  double x, y, z;
  bool inside;  // inside the McCormick envelope but LP-infeasible, or the converse
};

// Samples points inside and outside the bilinear McCormick envelope and checks
// that LP-extension feasibility agrees exactly with envelope membership.
std::optional<SharpnessCounterexample> sharpness_probe(Method method, int L, double lambda,
                                                       int n_points, uint64_t seed);

// (1/6) (sum lx_i^2)(sum ly_j^2): the average error width of a piecewise
// McCormick relaxation with the given breakpoint spacings. Each length vector
// must sum to 1 within 1e-9.
double breakpoint_objective(const std::vector<double>& lx, const std::vector<double>& ly);

struct ProfileInput {
  std::vector<std::string> solver_names;
  std::vector<std::string> instance_names;
  // bounds[p][s]: best dual bound of solver s on instance p; NaN = missing run
  // (falls back to the worst bound among solvers for that instance).
  std::vector<std::vector<double>> bounds;
};

struct ProfileStep {
  double tau = 1.0;
  double p = 0.0;
};

struct ProfileTable {
  std::vector<std::string> solver_names;
  std::vector<std::string> instance_names;
  std::vector<std::vector<double>> ratios;       // r_{p,s} = d_{p,s} / min_s d_{p,s}
  std::vector<std::vector<ProfileStep>> steps;   // per solver, non-decreasing
};

// Dual-bound performance profiles: bounds are canonicalized to minimization
// with min_s d_{p,s} > 0 (a common constant is added per instance when
// needed), and P(tau) counts instances where the solver's bound is within a
// factor tau of the best bound.
ProfileTable performance_profile(const ProfileInput& input);

// (prod (t_i + s))^{1/n} - s, computed in the log domain.
double shifted_geomean(const std::vector<double>& values, double shift = 10.0);

struct ErrorReportRow {
  Method method = Method::NMDT;
  ErrorSurface surface = ErrorSurface::NmdtBilinear;
  int L = 1;
  int L1 = 1;
  double lambda = 0.5;
  double max_error_theory = 0.0;
  double max_error_empirical = 0.0;
  double avg_width_theory = 0.0;
  double avg_width_empirical = 0.0;
  double avg_width_stderr = 0.0;
  double lp_volume = std::numeric_limits<double>::quiet_NaN();
  double lp_volume_stderr = std::numeric_limits<double>::quiet_NaN();
};

// One row per surface (bilinear and square) of the method at depth L.
std::vector<ErrorReportRow> analyze_method(Method method, int L, int L1, double lambda,
                                           long samples, long resolution, uint64_t seed);

}  // namespace quadrelax
