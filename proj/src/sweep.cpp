#include "mesojj/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "mesojj/errors.hpp"

namespace mesojj {

namespace {

SweepRecord record_point(double l_bar, const ParityPair& pair) {
  const JunctionParams p = extract_junction_params(pair);
  SweepRecord r;
  r.l_bar = l_bar;
  r.ic1_bar = p.ic1_bar;
  r.ic2_bar = p.ic2_bar;
  r.ej1_bar = p.ej1_bar;
  r.ej2_bar = p.ej2_bar;
  r.eminus_minus_eplus = p.eminus_bar - p.eplus_bar;
  r.iterations = pair.even.iterations + pair.odd.iterations;
  r.residual_norm = std::max(pair.even.residual_norm, pair.odd.residual_norm);
  return r;
}

}  // namespace

SweepResult run_sweep(const std::vector<double>& l_values, const Geometry& base, const Grid& grid,
                      const SolverOptions& solver_options, const SweepOptions& sweep_options) {
  if (l_values.empty()) throw ConfigError("sweep: no gap values given");

  SweepResult result;

  auto solve_point = [&](double l_bar, const SolverOptions& opts) {
    Geometry geometry = base;
    geometry.gap = l_bar;
    return solve_pair(geometry, grid, opts);
  };

  if (sweep_options.warm_start || sweep_options.threads <= 1) {
    // Sequential pass; with warm start each gap reuses the previous fields
    // as the initial guess and falls back to the bulk guess on failure.
    SolverOptions opts = solver_options;
    std::vector<double> prev_even_psi, prev_even_v, prev_odd_psi, prev_odd_v;
    for (double l_bar : l_values) {
      ParityPair pair;
      bool solved = false;
      if (sweep_options.warm_start && !prev_even_psi.empty()) {
        try {
          SolverOptions warm = opts;
          warm.psi_guess = prev_even_psi;
          warm.v_guess = prev_even_v;
          Geometry geometry = base;
          geometry.gap = l_bar;
          pair.geometry = geometry;
          pair.grid = grid;
          pair.even = solve_parity(Parity::Even, geometry, grid, warm);
          warm.psi_guess = prev_odd_psi;
          warm.v_guess = prev_odd_v;
          pair.odd = solve_parity(Parity::Odd, geometry, grid, warm);
          const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
          pair.psi_r.resize(grid.size());
          pair.psi_l.resize(grid.size());
          for (std::size_t j = 0; j < grid.size(); ++j) {
            pair.psi_r[j] = (pair.even.psi[j] + pair.odd.psi[j]) * inv_sqrt2;
            pair.psi_l[j] = (pair.even.psi[j] - pair.odd.psi[j]) * inv_sqrt2;
          }
          solved = true;
        } catch (const SolverError&) {
          solved = false;  // retry cold below
        }
      }
      if (!solved) {
        try {
          pair = solve_point(l_bar, solver_options);
          solved = true;
        } catch (const SolverError& err) {
          result.failures.push_back({l_bar, err.what()});
          continue;
        }
      }
      try {
        result.records.push_back(record_point(l_bar, pair));
      } catch (const std::exception& err) {
        result.failures.push_back({l_bar, err.what()});
        continue;
      }
      if (sweep_options.warm_start) {
        prev_even_psi = pair.even.psi;
        prev_even_v = pair.even.v;
        prev_odd_psi = pair.odd.psi;
        prev_odd_v = pair.odd.v;
      }
    }
  } else {
    // Independent cold starts; points can run concurrently.
    const int threads = sweep_options.threads;
    std::vector<std::future<SweepRecord>> futures(l_values.size());
    std::vector<std::string> errors(l_values.size());
    for (std::size_t i = 0; i < l_values.size(); i += threads) {
      const std::size_t hi = std::min(l_values.size(), i + threads);
      for (std::size_t k = i; k < hi; ++k)
        futures[k] = std::async(std::launch::async, [&, k] {
          return record_point(l_values[k], solve_point(l_values[k], solver_options));
        });
      for (std::size_t k = i; k < hi; ++k) {
        try {
          result.records.push_back(futures[k].get());
        } catch (const std::exception& err) {
          result.failures.push_back({l_values[k], err.what()});
        }
      }
    }
  }

  if (result.records.empty())
    throw SolverError("sweep: every gap value failed", 0.0, 0);
  return result;
}

FitCoefficients fit_log_quadratic(std::span<const double> l_values,
                                  std::span<const double> currents) {
  const std::size_t m = l_values.size();
  if (currents.size() != m) throw std::invalid_argument("fit: size mismatch");
  if (m < 3) throw ConfigError("fit: at least 3 points required");
  for (double c : currents)
    if (!(std::abs(c) > 0) || !std::isfinite(c))
      throw ConfigError("fit: current magnitudes must be finite and nonzero");

  // Work in a centered/scaled abscissa to keep the normal equations well
  // conditioned, then map the coefficients back to the raw polynomial.
  double mean = 0;
  for (double l : l_values) mean += l;
  mean /= static_cast<double>(m);
  double spread = 0;
  for (double l : l_values) spread = std::max(spread, std::abs(l - mean));
  if (!(spread > 0)) throw ConfigError("fit: abscissa values are all identical");

  double s00 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = (l_values[i] - mean) / spread;
    const double y = std::log(std::abs(currents[i]));
    const double t2 = t * t;
    s00 += 1;
    s1 += t;
    s2 += t2;
    s3 += t2 * t;
    s4 += t2 * t2;
    b0 += y;
    b1 += t * y;
    b2 += t2 * y;
  }

  // 3x3 symmetric solve by Gaussian elimination with partial pivoting.
  double a[3][4] = {{s00, s1, s2, b0}, {s1, s2, s3, b1}, {s2, s3, s4, b2}};
  for (int col = 0; col < 3; ++col) {
    int p = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[p][col])) p = r;
    if (!(std::abs(a[p][col]) > 1e-12)) throw ConfigError("fit: degenerate abscissa values");
    if (p != col) std::swap(a[p], a[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int cc = col; cc < 4; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }
  double coeff[3];
  for (int r = 2; r >= 0; --r) {
    double sum = a[r][3];
    for (int cc = r + 1; cc < 3; ++cc) sum -= a[r][cc] * coeff[cc];
    coeff[r] = sum / a[r][r];
  }

  FitCoefficients fit;
  fit.a = coeff[2] / (spread * spread);
  fit.b = coeff[1] / spread - 2.0 * coeff[2] * mean / (spread * spread);
  fit.c = coeff[0] - coeff[1] * mean / spread + coeff[2] * mean * mean / (spread * spread);

  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double y = std::log(std::abs(currents[i]));
    const double pred = fit.a * l_values[i] * l_values[i] + fit.b * l_values[i] + fit.c;
    ss += (y - pred) * (y - pred);
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(m));
  return fit;
}

double extrapolate(const FitCoefficients& fit, double l_bar) {
  return std::exp(fit.a * l_bar * l_bar + fit.b * l_bar + fit.c);
}

}  // namespace mesojj
