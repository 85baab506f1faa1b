#pragma once

#include <vector>

#include "mesojj/model.hpp"

namespace mesojj {

enum class Parity { Even, Odd };

struct SolverOptions {
  double tol = 1e-10;   // residual max-norm target
  int max_iter = 50;
  double damping = 1.0;  // initial Newton step scale in (0, 1]
  // Optional warm-start fields; empty means the bulk guess.
  std::vector<double> psi_guess;
  std::vector<double> v_guess;

  void validate(std::size_t nodes) const;  // throws ConfigError
};

// One self-consistent stationary state of fixed parity on the half line.
// Sign convention: the order parameter is non-negative near the outer end
// of the electrode (psi(x_max) = 1 for semi-infinite electrodes).
struct ParitySolution {
  Parity parity = Parity::Even;
  std::vector<double> psi;
  std::vector<double> v;
  double residual_norm = 0;
  int iterations = 0;
  bool converged = false;
};

// Both parity states on a common grid plus their Hadamard combinations
// psi_r = (psi_even + psi_odd)/sqrt(2), psi_l = (psi_even - psi_odd)/sqrt(2),
// evaluated nodewise on the half line.
struct ParityPair {
  Geometry geometry;
  Grid grid;
  ParitySolution even;
  ParitySolution odd;
  std::vector<double> psi_l, psi_r;
};

// Discrete residual of the coupled amplitude/potential equations,
// interleaved per node as (amplitude row, potential row). Interior rows:
//   -D2 psi + v psi        and   2 D2 v + psi^2 - rho,
// with D2 the second-order central difference. Node 0 rows impose the
// parity conditions by ghost elimination; the outer rows impose the
// far-field data for the given geometry kind.
std::vector<double> residual(const std::vector<double>& psi, const std::vector<double>& v,
                             Parity parity, const BackgroundProfile& background,
                             const Grid& grid, const Geometry& geometry);

ParitySolution solve_parity(Parity parity, const Geometry& geometry, const Grid& grid,
                            const SolverOptions& options = {});

ParityPair solve_pair(const Geometry& geometry, const Grid& grid,
                      const SolverOptions& options = {});

// Left/right mode profiles reconstructed on the full line [-x_max, x_max]
// by parity reflection.
struct FullLineBasis {
  std::vector<double> x;
  std::vector<double> psi_l, psi_r;
  std::vector<double> psi_even, psi_odd;
  std::vector<double> v_even, v_odd;
};

FullLineBasis left_right_basis(const ParityPair& pair);

// Analytic Jacobian of `residual` applied to a direction vector in the
// interleaved (psi, v) layout; exposed so tests can difference it against
// the residual directly.
std::vector<double> jacobian_apply(const std::vector<double>& psi, const std::vector<double>& v,
                                   Parity parity, const BackgroundProfile& background,
                                   const Grid& grid, const Geometry& geometry,
                                   const std::vector<double>& direction);

}  // namespace mesojj
