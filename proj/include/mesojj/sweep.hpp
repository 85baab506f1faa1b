#pragma once

#include <span>
#include <string>
#include <vector>

#include "mesojj/junction.hpp"

namespace mesojj {

struct SweepRecord {
  double l_bar = 0;
  double ic1_bar = 0, ic2_bar = 0;
  double ej1_bar = 0, ej2_bar = 0;
  double eminus_minus_eplus = 0;
  int iterations = 0;       // both parities combined
  double residual_norm = 0; // worst of the two parities
};

struct SweepFailure {
  double l_bar = 0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<SweepFailure> failures;
};

struct SweepOptions {
  bool warm_start = true;  // reuse the previous gap's solution as the guess
  int threads = 0;         // used only without warm start; 0 or 1 = serial
};

// Solves both parities for each gap value, keeping `base` geometry
// otherwise fixed. Individual failures are recorded and skipped; the call
// throws only if every point fails.
SweepResult run_sweep(const std::vector<double>& l_values, const Geometry& base,
                      const Grid& grid, const SolverOptions& solver_options = {},
                      const SweepOptions& sweep_options = {});

// ln|i| = a l^2 + b l + c, least squares.
struct FitCoefficients {
  double a = 0, b = 0, c = 0;
  double rms_residual = 0;
};

FitCoefficients fit_log_quadratic(std::span<const double> l_values,
                                  std::span<const double> currents);

double extrapolate(const FitCoefficients& fit, double l_bar);

}  // namespace mesojj
