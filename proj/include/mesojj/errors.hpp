#pragma once

#include <stdexcept>
#include <string>

namespace mesojj {

// Validation failures in user-supplied configuration or arguments.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton iteration did not reach the requested residual norm, or the
// linearized system was singular. CLI exit code 3.
struct SolverError : std::runtime_error {
  SolverError(const std::string& msg, double residual, int iters)
      : std::runtime_error(msg), residual_norm(residual), iterations(iters) {}
  double residual_norm;
  int iterations;
};

// Operation not defined for the requested geometry (e.g. junction
// capacitance on a half-infinite electrode pair).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal cross-check failed beyond the allowed band (e.g. two
// independent routes to the same coupling disagree grossly).
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Phase is undefined at vanishing mode occupation, or the polar
// equations of motion hit the |n| -> 1 coordinate singularity.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures while emitting outputs. CLI exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mesojj
