#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mesojj/junction.hpp"

namespace mesojj {

// Closure coefficients for the two-mode equations of motion, everything in
// prefactor energy units with time measured against the same scale.
//   charging = norm^2 / (8 c_j)   (imbalance stiffness)
//   dipole   = norm * d / 2       (drive coupling)
// Both vanish when the geometry provides no capacitance block.
struct DynamicsParams {
  double ej1 = 0;
  double ej2 = 0;
  double charging = 0;
  double dipole = 0;
  bool has_electrostatics = false;
};

DynamicsParams dynamics_params(const JunctionParams& params);

// Time-dependent external field amplitude v(t).
struct DriveSpec {
  enum class Kind { None, Constant, Sinusoid };
  Kind kind = Kind::None;
  double amplitude = 0;
  double frequency = 0;  // angular
  double phase = 0;

  double value(double t) const;
};

// Mode amplitudes (right, left); |amp_r|^2 + |amp_l|^2 = 1 up to drift.
struct TwoModeState {
  std::complex<double> amp_r{1.0 / 1.4142135623730951, 0.0};
  std::complex<double> amp_l{1.0 / 1.4142135623730951, 0.0};
};

// Polar variables: n = n_left - n_right in [-1, 1], phi the relative phase.
struct MadelungState {
  double n = 0;
  double phi = 0;
};

// Conjugate pair: q in units of half the total transferable charge
// (q = n), phi_flux in radians (phi_flux = phi). Kept as a distinct type
// because its equations of motion are generated from the Hamiltonian.
struct ChargeFluxState {
  double q = 0;
  double phi_flux = 0;
};

MadelungState to_madelung(const TwoModeState& state);   // throws SingularityError below 1e-12 occupation
TwoModeState to_two_mode(const MadelungState& state);   // symmetric global phase

struct TwoModeDerivative {
  std::complex<double> amp_r;
  std::complex<double> amp_l;
};

TwoModeDerivative two_mode_rhs(const TwoModeState& state, const DynamicsParams& params,
                               const DriveSpec& drive, double t);

// Polar equations of motion; guard keeps 1 - n^2 away from zero and a state
// beyond it throws SingularityError.
std::pair<double, double> madelung_rhs(const MadelungState& state, const DynamicsParams& params,
                                       const DriveSpec& drive, double t, double guard = 1e-9);

// Same flow written in the conjugate variables, derived term by term from
// the Hamiltonian below.
std::pair<double, double> charge_flux_rhs(const ChargeFluxState& state,
                                          const DynamicsParams& params, const DriveSpec& drive,
                                          double t);

// H(q, phi) = -dipole*v*q + charging/2 * q^2
//             - ej1 sqrt(1-q^2) cos(phi) - 2 ej2 (1-q^2) cos^2(phi),
// in prefactor energy units.
double hamiltonian_energy(const ChargeFluxState& state, const DynamicsParams& params,
                          const DriveSpec& drive, double t);
double hamiltonian_energy(const TwoModeState& state, const DynamicsParams& params,
                          const DriveSpec& drive, double t);

enum class StateForm { Complex, Madelung, ChargeFlux };

// Sampled trajectory; the amplitude columns are filled for the Complex
// form, and (n, phi) everywhere (derived from the amplitudes when
// possible, NaN phase at vanishing occupation).
struct Trajectory {
  StateForm form = StateForm::Complex;
  std::vector<double> t;
  std::vector<std::complex<double>> amp_r, amp_l;
  std::vector<double> n, phi;
  std::vector<double> norm;    // Complex form only
  std::vector<double> energy;  // Hamiltonian at each sample
};

struct IntegrateOptions {
  double dt = 1e-3;
  double t_end = 10.0;
  bool renormalize = false;  // amplitude renormalization each step (off: drift is a diagnostic)
};

Trajectory integrate(const TwoModeState& initial, const DynamicsParams& params,
                     const DriveSpec& drive, const IntegrateOptions& options);
Trajectory integrate(const MadelungState& initial, const DynamicsParams& params,
                     const DriveSpec& drive, const IntegrateOptions& options);
Trajectory integrate(const ChargeFluxState& initial, const DynamicsParams& params,
                     const DriveSpec& drive, const IntegrateOptions& options);

// Current-phase relation i(phi) = ic1 sin(phi) + ic2 sin(2 phi) in
// prefactor current units.
double cpr_current(double phi, double ic1_bar, double ic2_bar);

// Undriven minimum of the Hamiltonian at zero imbalance. Requires the
// physical sign regime ej1 > 0, ej2 < 0. Two minima +-phi_star exist in the
// anharmonic branch; phi_star reports the positive representative.
struct GroundState {
  bool trivial = true;     // phi_star == 0
  bool degenerate = false; // boundary case ej1 == -4 ej2
  double n_star = 0;
  double phi_star = 0;
};

GroundState classify_ground_state(double ej1_bar, double ej2_bar);

// Expansion of the Hamiltonian around small imbalance, suitable for a
// charge-qubit reduction. `charging` is the full coefficient of q^2 coming
// from the capacitance (norm^2 / (16 c_j)); the flag reports whether it
// dominates the occupation-dependent tunneling corrections.
struct QubitExpansion {
  double charging = 0;
  double dipole = 0;  // d_bar
  double ej1 = 0;
  double ej2 = 0;
  bool charging_dominant = false;
  std::string report;  // rendered H0/H1/H2 summary
};

QubitExpansion qubit_expansion(const JunctionParams& params, const DriveSpec& drive);

}  // namespace mesojj
