#pragma once

#include <optional>
#include <span>
#include <utility>

#include "mesojj/bvp.hpp"

namespace mesojj {

// Rectangle-rule quadrature: dx times the sum of the samples. The caller
// chooses which endpoint to drop.
double rect_integral(std::span<const double> samples, double dx);

// Trapezoid alternative, kept for refinement studies; the production paths
// all use the rectangle rule.
double trapezoid_integral(std::span<const double> samples, double dx);

// Rectangle-rule sum of an even integrand over the full line, assembled
// from half-line samples. The reflected left-rule sum gives weight 1 to the
// first and last nodes and 2 to every interior node, which keeps the
// quadrature second order for smooth decaying integrands.
double full_line_even_integral(std::span<const double> half_line_samples, double dx);

// Nodal first derivative on the half grid. The value at node 0 uses the
// parity ghost (zero for an even field); the outer node uses the one-sided
// second-order stencil.
std::vector<double> half_line_derivative(std::span<const double> field, double dx,
                                         Parity parity);

// Unitless tunneling couplings and critical currents. k1/k2 carry the
// electrode-number factor absorbed, i.e. they are N*K in prefactor energy
// units, so ej1 = -k1 and ej2 = -k2/4 without further bookkeeping.
struct Couplings {
  double k1_bar = 0;
  double k2_bar = 0;
  double ic1_bar = 0;  // -I1/4 with I1 the symmetric overlap integral
  double ic2_bar = 0;  // -I2/8 with I2 the antisymmetric overlap integral
};

Couplings josephson_couplings(const ParityPair& pair);

// Field-plus-gradient energy of each parity state over the full line, in
// prefactor energy units. Returns (even, odd).
std::pair<double, double> parity_energies(const ParityPair& pair);

// First and second tunneling energies with their independent duals:
// ej1 from the overlap integral and from (E_odd - E_even)/2; ej2 from the
// overlap integral and from the gap-field energy -1/8 * int |d(v_odd -
// v_even)/dx|^2. Each pair is algebraically identical given the field
// equations; a disagreement beyond 1e-2 relative throws NumericsError.
struct JosephsonEnergies {
  double ej1_bar = 0;
  double ej2_bar = 0;
  double ej1_dual_bar = 0;
  double ej2_dual_bar = 0;
};

JosephsonEnergies josephson_energies(const ParityPair& pair);

// Junction capacitance and effective dipole length for finite electrodes,
// from the mode-overlap density g = psi_even * psi_odd:
//   d_bar  = (4 / norm) * int_0^inf x g dx
//   c_j_bar = norm^2 / (8 T),  T = int_0^inf g(x) int_0^x int_{x'}^inf
//             g(x'') dx'' dx' dx   (evaluated as two nested prefix sums).
// Samples are treated as cell values on (x_{j-1}, x_j], which makes both
// results exact for piecewise-constant profiles aligned to the grid.
struct ElectrostaticParams {
  double c_j_bar = 0;
  double d_bar = 0;
  double norm_bar = 0;  // full-line norm of either parity state (averaged)
};

ElectrostaticParams electrostatics(const ParityPair& pair);

// Everything the junction exposes, in prefactor units. The capacitance
// block is present only for finite electrodes.
struct JunctionParams {
  double k1_bar = 0, k2_bar = 0;
  double ej1_bar = 0, ej2_bar = 0;
  double ej1_dual_bar = 0, ej2_dual_bar = 0;
  double eplus_bar = 0, eminus_bar = 0;
  double ic1_bar = 0, ic2_bar = 0;
  std::optional<double> c_j_bar, d_bar, norm_bar;
};

JunctionParams extract_junction_params(const ParityPair& pair);

}  // namespace mesojj
