// SPDX-License-Identifier: Apache-2.0
#include "quadrelax/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quadrelax/dnmdt.hpp"
#include "quadrelax/envelopes.hpp"
#include "quadrelax/nmdt.hpp"
#include "quadrelax/sawtooth.hpp"
#include "quadrelax/simplex.hpp"

namespace quadrelax {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pow2(int e) { return std::ldexp(1.0, e); }

// Vertical gaps of univariate NMDT on piece k (digits fixed), delta in [0,w].
double nmdt_square_under_gap(double w, long k, double delta) {
  const double x = k * w + delta;
  return delta * x - std::max(0.0, w * x + delta - w);
}
double nmdt_square_over_gap(double w, long k, double delta) {
  const double x = k * w + delta;
  return std::min(w * x, delta) - delta * x;
}

struct Welford {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  double stderr_of_mean() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0; }
};

}  // namespace

const char* to_string(ErrorSurface s) {
  switch (s) {
    case ErrorSurface::McCormickBilinear: return "mccormick_bilinear";
    case ErrorSurface::McCormickSquare: return "mccormick_square";
    case ErrorSurface::NmdtBilinear: return "nmdt_bilinear";
    case ErrorSurface::NmdtSquare: return "nmdt_square";
    case ErrorSurface::DnmdtBilinear: return "dnmdt_bilinear";
    case ErrorSurface::DnmdtSquare: return "dnmdt_square";
    case ErrorSurface::SawtoothEpigraph: return "sawtooth_epigraph";
  }
  return "?";
}

double max_error_theoretical(ErrorSurface s, int L) {
  if (L < 1 && s != ErrorSurface::McCormickBilinear && s != ErrorSurface::McCormickSquare)
    throw ConfigError("depth L must be >= 1");
  switch (s) {
    case ErrorSurface::McCormickBilinear: return 0.25;
    case ErrorSurface::McCormickSquare: return 0.25;
    case ErrorSurface::NmdtBilinear: return pow2(-L - 2);
    case ErrorSurface::NmdtSquare: {
      const double w = pow2(-L);
      return pow2(-L - 2) - pow2(-3 * L - 2) / ((1.0 + w) * (1.0 + w));
    }
    case ErrorSurface::DnmdtBilinear: return pow2(-2 * L - 2);
    case ErrorSurface::DnmdtSquare: return pow2(-2 * L - 2);
    case ErrorSurface::SawtoothEpigraph: return pow2(-2 * L - 4);
  }
  return kNaN;
}

UnivariateNmdtErrorSplit univariate_nmdt_error_split(int L, long resolution) {
  UnivariateNmdtErrorSplit r;
  const double w = pow2(-L);
  const long cells = 1L << L;
  const long steps = std::max<long>(resolution / cells, 64);
  for (long k = 0; k < cells; ++k) {
    for (long t = 0; t <= steps; ++t) {
      const double delta = w * t / steps;
      r.under_empirical = std::max(r.under_empirical, nmdt_square_under_gap(w, k, delta));
      r.over_empirical = std::max(r.over_empirical, nmdt_square_over_gap(w, k, delta));
    }
  }
  r.under_theory = max_error_theoretical(ErrorSurface::NmdtSquare, L);
  if (L == 1) {
    r.over_theory = pow2(-4);
  } else {
    r.over_theory = pow2(-L - 2) - pow2(-3 * L - 2) / ((1.0 - w) * (1.0 - w));
  }
  return r;
}

double ser_empirical_max_gap(int L, long grid_cells) {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId y = m.add_continuous("y", -1.0, 2.0);
  build_epigraph_relaxation(m, x, y, L);
  SimplexSolver solver(m);
  solver.set_objective({{y, 1.0}});
  double worst = 0.0;
  for (long i = 0; i <= grid_cells; ++i) {
    const double xv = static_cast<double>(i) / grid_cells;
    solver.set_var_bounds(x, xv, xv);
    const LpResult lp = solver.solve();
    if (lp.status != LpStatus::Optimal) throw NumericalFailure("epigraph probe LP failed");
    worst = std::max(worst, xv * xv - lp.objective);
  }
  return worst;
}

double max_error_empirical(ErrorSurface s, int L, long resolution) {
  const double w = pow2(-L);
  switch (s) {
    case ErrorSurface::McCormickBilinear:
      return mccormick_max_error(Interval{0.0, 1.0}, Interval{0.0, 1.0}).value;
    case ErrorSurface::McCormickSquare:
      return 0.25;  // secant gap at the midpoint
    case ErrorSurface::NmdtBilinear: {
      // Per digit pattern the only slack is one McCormick over [0,w] x [0,1].
      double worst = 0.0;
      for (long k = 0; k < (1L << L); ++k)
        worst = std::max(worst, mccormick_max_error(Interval{0.0, w}, Interval{0.0, 1.0}).value);
      return worst;
    }
    case ErrorSurface::DnmdtBilinear: {
      double worst = 0.0;
      for (long k = 0; k < (1L << (2 * L)); ++k)
        worst = std::max(worst, mccormick_max_error(Interval{0.0, w}, Interval{0.0, w}).value);
      return worst;
    }
    case ErrorSurface::DnmdtSquare: {
      // Residual square envelope over [0,w]: both sides peak at w^2/4.
      double worst = 0.0;
      for (long k = 0; k < (1L << L); ++k) worst = std::max(worst, 0.25 * w * w);
      return worst;
    }
    case ErrorSurface::NmdtSquare: {
      const UnivariateNmdtErrorSplit split = univariate_nmdt_error_split(L, resolution);
      return std::max(split.under_empirical, split.over_empirical);
    }
    case ErrorSurface::SawtoothEpigraph: {
      long cells = 1;
      while (cells < resolution) cells <<= 1;
      return ser_empirical_max_gap(L, cells);
    }
  }
  return kNaN;
}

double avg_width_theoretical(ErrorSurface s, int L) {
  switch (s) {
    case ErrorSurface::McCormickBilinear: return 1.0 / 6.0;
    case ErrorSurface::McCormickSquare: return 0.25;
    case ErrorSurface::NmdtBilinear: return (1.0 / 6.0) * pow2(-L);
    case ErrorSurface::DnmdtBilinear: return (1.0 / 6.0) * pow2(-2 * L);
    case ErrorSurface::DnmdtSquare: return 0.25 * pow2(-2 * L);
    case ErrorSurface::NmdtSquare: return kNaN;  // closed form omitted upstream
    case ErrorSurface::SawtoothEpigraph: return kNaN;
  }
  return kNaN;
}

MonteCarloEstimate avg_width_empirical(ErrorSurface s, int L, long samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = pow2(-L);
  const long cells = L >= 1 ? (1L << L) : 1;
  Welford acc;

  auto cell_of = [&](double v) {
    long c = static_cast<long>(std::floor(v * cells));
    return std::min(std::max(c, 0L), cells - 1);
  };

  for (long t = 0; t < samples; ++t) {
    double width = 0.0;
    switch (s) {
      case ErrorSurface::McCormickBilinear: {
        const double x = unit(rng), y = unit(rng);
        width = mccormick_z_range(Interval{0.0, 1.0}, Interval{0.0, 1.0}, x, y).width();
        break;
      }
      case ErrorSurface::NmdtBilinear: {
        const double x = unit(rng), y = unit(rng);
        const long kx = cell_of(x);
        width = mccormick_z_range(Interval{kx * w, (kx + 1) * w}, Interval{0.0, 1.0}, x, y).width();
        break;
      }
      case ErrorSurface::DnmdtBilinear: {
        const double x = unit(rng), y = unit(rng);
        const long kx = cell_of(x), ky = cell_of(y);
        width = mccormick_z_range(Interval{kx * w, (kx + 1) * w}, Interval{ky * w, (ky + 1) * w},
                                  x, y)
                    .width();
        break;
      }
      case ErrorSurface::McCormickSquare: {
        const double x = unit(rng);
        width = square_envelope_range(Interval{0.0, 1.0}, x).width();
        break;
      }
      case ErrorSurface::NmdtSquare: {
        const double x = unit(rng);
        const long k = cell_of(x);
        const double delta = x - k * w;
        width = nmdt_square_under_gap(w, k, delta) + nmdt_square_over_gap(w, k, delta);
        break;
      }
      case ErrorSurface::DnmdtSquare: {
        const double x = unit(rng);
        const double delta = x - cell_of(x) * w;
        width = w * delta - std::max(0.0, 2.0 * w * delta - w * w);
        break;
      }
      case ErrorSurface::SawtoothEpigraph:
        throw DomainError("the epigraph relaxation has no finite volume");
    }
    acc.add(width);
  }
  MonteCarloEstimate est;
  est.mean = acc.mean;
  est.stderr_of_mean = acc.stderr_of_mean();
  est.samples = samples;
  return est;
}

MonteCarloEstimate lp_volume_univariate(Method method, int L, long samples, uint64_t seed) {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId y = m.add_continuous("y", 0.0, 1.0);
  switch (method) {
    case Method::McCormickOnly: square_envelope(m, x, y); break;
    case Method::NMDT:
    case Method::TNMDT: relax_square_nmdt(m, y, x, L); break;
    case Method::DNMDT:
    case Method::TDNMDT: relax_square_dnmdt(m, y, x, L); break;
  }
  SimplexSolver solver(m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Welford acc;
  for (long t = 0; t < samples; ++t) {
    const double xv = unit(rng);
    solver.set_var_bounds(x, xv, xv);
    solver.set_objective({{y, 1.0}});
    const LpResult lo = solver.solve();
    solver.set_objective({{y, -1.0}});
    const LpResult hi = solver.solve();
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
      throw NumericalFailure("univariate LP volume probe failed");
    acc.add(-hi.objective - lo.objective);
  }
  MonteCarloEstimate est;
  est.mean = acc.mean;
  est.stderr_of_mean = acc.stderr_of_mean();
  est.samples = samples;
  return est;
}

std::optional<SharpnessCounterexample> sharpness_probe(Method method, int L, double lambda,
                                                       int n_points, uint64_t seed) {
  MipModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  const VarId y = m.add_continuous("y", 0.0, 1.0);
  const VarId z = m.add_continuous("z", -1.0, 2.0);
  switch (method) {
    case Method::McCormickOnly: bilinear_envelope(m, x, y, z); break;
    case Method::NMDT:
    case Method::TNMDT: relax_bilinear_nmdt(m, z, x, y, L); break;
    case Method::DNMDT:
    case Method::TDNMDT: relax_bilinear_dnmdt(m, z, x, y, L, lambda); break;
  }
  SimplexSolver solver(m);
  solver.set_objective({});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Interval box{0.0, 1.0};

  auto lp_feasible = [&](double xv, double yv, double zv) {
    solver.set_var_bounds(x, xv, xv);
    solver.set_var_bounds(y, yv, yv);
    solver.set_var_bounds(z, zv, zv);
    return solver.solve().status == LpStatus::Optimal;
  };

  for (int t = 0; t < n_points; ++t) {
    const double xv = unit(rng), yv = unit(rng);
    const Interval zr = mccormick_z_range(box, box, xv, yv);
    const double zin = zr.lo + unit(rng) * zr.width();
    if (!lp_feasible(xv, yv, zin)) return SharpnessCounterexample{xv, yv, zin, true};

    const double offset = 0.01 + 0.3 * unit(rng);
    const double zout = unit(rng) < 0.5 ? zr.lo - offset : zr.hi + offset;
    if (lp_feasible(xv, yv, zout)) return SharpnessCounterexample{xv, yv, zout, false};
  }
  return std::nullopt;
}

double breakpoint_objective(const std::vector<double>& lx, const std::vector<double>& ly) {
  auto sum_sq = [](const std::vector<double>& v, const char* which) {
    double sum = 0.0, sq = 0.0;
    for (double l : v) {
      if (l < 0.0) throw DomainError(std::string(which) + " lengths must be non-negative");
      sum += l;
      sq += l * l;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw DomainError(std::string(which) + " lengths must sum to 1");
    return sq;
  };
  return (1.0 / 6.0) * sum_sq(lx, "x") * sum_sq(ly, "y");
}

ProfileTable performance_profile(const ProfileInput& input) {
  const size_t np = input.instance_names.size();
  const size_t ns = input.solver_names.size();
  ProfileTable table;
  table.solver_names = input.solver_names;
  table.instance_names = input.instance_names;
  table.ratios.assign(np, std::vector<double>(ns, 1.0));

  // rho[p][s] = best_p / d_{p,s} >= 1 after orientation normalization.
  std::vector<std::vector<double>> rho(np, std::vector<double>(ns, 1.0));
  for (size_t p = 0; p < np; ++p) {
    std::vector<double> d = input.bounds[p];
    double worst = std::numeric_limits<double>::infinity();
    for (double v : d) {
      if (!std::isnan(v)) worst = std::min(worst, v);
    }
    if (!std::isfinite(worst)) throw DomainError("no bounds recorded for instance " +
                                                 input.instance_names[p]);
    for (double& v : d) {
      if (std::isnan(v)) v = worst;  // missing runs take the worst bound
    }
    double dmin = *std::min_element(d.begin(), d.end());
    if (dmin <= 0.0) {
      const double c = 1.0 - dmin;  // shift all bounds so the minimum becomes 1
      for (double& v : d) v += c;
      dmin = 1.0;
    }
    const double dmax = *std::max_element(d.begin(), d.end());
    for (size_t s = 0; s < ns; ++s) {
      table.ratios[p][s] = d[s] / dmin;
      rho[p][s] = dmax / d[s];
    }
  }

  table.steps.resize(ns);
  for (size_t s = 0; s < ns; ++s) {
    std::vector<double> taus(np);
    for (size_t p = 0; p < np; ++p) taus[p] = rho[p][s];
    std::sort(taus.begin(), taus.end());
    std::vector<ProfileStep>& steps = table.steps[s];
    for (size_t p = 0; p < np; ++p) {
      const double frac = static_cast<double>(p + 1) / np;
      if (!steps.empty() && steps.back().tau == taus[p]) {
        steps.back().p = frac;
      } else {
        steps.push_back(ProfileStep{taus[p], frac});
      }
    }
  }
  return table;
}

double shifted_geomean(const std::vector<double>& values, double shift) {
  if (values.empty()) return 0.0;
  double log_sum = 0.0;
  for (double v : values) {
    if (v < 0.0) throw DomainError("shifted geometric mean expects non-negative values");
    log_sum += std::log(v + shift);
  }
  return std::exp(log_sum / values.size()) - shift;
}

std::vector<ErrorReportRow> analyze_method(Method method, int L, int L1, double lambda,
                                           long samples, long resolution, uint64_t seed) {
  ErrorSurface bilinear, square;
  switch (method) {
    case Method::McCormickOnly:
      bilinear = ErrorSurface::McCormickBilinear;
      square = ErrorSurface::McCormickSquare;
      break;
    case Method::NMDT:
    case Method::TNMDT:
      bilinear = ErrorSurface::NmdtBilinear;
      square = ErrorSurface::NmdtSquare;
      break;
    default:
      bilinear = ErrorSurface::DnmdtBilinear;
      square = ErrorSurface::DnmdtSquare;
      break;
  }

  std::vector<ErrorReportRow> rows;
  for (ErrorSurface s : {bilinear, square}) {
    ErrorReportRow row;
    row.method = method;
    row.surface = s;
    row.L = L;
    row.L1 = L1;
    row.lambda = lambda;
    row.max_error_theory = max_error_theoretical(s, std::max(L, 1));
    row.max_error_empirical = max_error_empirical(s, std::max(L, 1), resolution);
    row.avg_width_theory = avg_width_theoretical(s, std::max(L, 1));
    const MonteCarloEstimate width = avg_width_empirical(s, std::max(L, 1), samples, seed);
    row.avg_width_empirical = width.mean;
    row.avg_width_stderr = width.stderr_of_mean;
    if (s == square) {
      const long lp_samples = std::min<long>(samples, 100000);
      const MonteCarloEstimate vol = lp_volume_univariate(method, std::max(L, 1), lp_samples, seed);
      row.lp_volume = vol.mean;
      row.lp_volume_stderr = vol.stderr_of_mean;
    }
    rows.push_back(row);
  }

  if (method_is_tightened(method)) {
    ErrorReportRow row;
    row.method = method;
    row.surface = ErrorSurface::SawtoothEpigraph;
    row.L = L1;
    row.L1 = L1;
    row.lambda = lambda;
    row.max_error_theory = max_error_theoretical(ErrorSurface::SawtoothEpigraph, L1);
    row.max_error_empirical = max_error_empirical(ErrorSurface::SawtoothEpigraph, L1, 8192);
    row.avg_width_theory = kNaN;
    row.avg_width_empirical = kNaN;
    row.avg_width_stderr = kNaN;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace quadrelax
