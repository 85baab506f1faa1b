#include "mesojj/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mesojj/errors.hpp"
#include "mesojj/io.hpp"

namespace mesojj {

namespace {

constexpr double kOccupationFloor = 1e-12;

double wrap_angle(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi + std::numbers::pi, two_pi);
  if (w <= 0) w += two_pi;
  return w - std::numbers::pi;
}

}  // namespace

DynamicsParams dynamics_params(const JunctionParams& params) {
  DynamicsParams d;
  d.ej1 = params.ej1_bar;
  d.ej2 = params.ej2_bar;
  if (params.c_j_bar && params.norm_bar && params.d_bar) {
    const double norm = *params.norm_bar;
    d.charging = norm * norm / (8.0 * *params.c_j_bar);
    d.dipole = norm * *params.d_bar / 2.0;
    d.has_electrostatics = true;
  }
  return d;
}

double DriveSpec::value(double t) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::Constant: return amplitude;
    case Kind::Sinusoid: return amplitude * std::sin(frequency * t + phase);
  }
  return 0.0;
}

MadelungState to_madelung(const TwoModeState& state) {
  const double nr = std::norm(state.amp_r), nl = std::norm(state.amp_l);
  if (std::sqrt(nr) < kOccupationFloor || std::sqrt(nl) < kOccupationFloor)
    throw SingularityError("to_madelung: relative phase undefined at vanishing occupation");
  MadelungState m;
  m.n = nl - nr;
  m.phi = wrap_angle(std::arg(state.amp_r) - std::arg(state.amp_l));
  return m;
}

TwoModeState to_two_mode(const MadelungState& state) {
  if (!(std::abs(state.n) <= 1.0))
    throw SingularityError("to_two_mode: |n| must not exceed 1");
  TwoModeState s;
  const double nr = (1.0 - state.n) / 2.0, nl = (1.0 + state.n) / 2.0;
  s.amp_r = std::polar(std::sqrt(nr), state.phi / 2.0);
  s.amp_l = std::polar(std::sqrt(nl), -state.phi / 2.0);
  return s;
}

TwoModeDerivative two_mode_rhs(const TwoModeState& state, const DynamicsParams& params,
                               const DriveSpec& drive, double t) {
  const double k1 = -params.ej1;
  const double k2 = -4.0 * params.ej2;
  const std::complex<double> cross = std::conj(state.amp_l) * state.amp_r;
  const double k = k1 + 2.0 * cross.real() * k2;
  const double imbalance = std::norm(state.amp_r) - std::norm(state.amp_l);
  const double u = params.dipole * drive.value(t) + params.charging * imbalance;

  const std::complex<double> minus_i(0.0, -1.0);
  TwoModeDerivative d;
  d.amp_r = minus_i * (u * state.amp_r + k * state.amp_l);
  d.amp_l = minus_i * (k * state.amp_r - u * state.amp_l);
  return d;
}

std::pair<double, double> madelung_rhs(const MadelungState& state, const DynamicsParams& params,
                                       const DriveSpec& drive, double t, double guard) {
  const double one_minus = 1.0 - state.n * state.n;
  if (one_minus < guard)
    throw SingularityError("madelung_rhs: |n| too close to 1");
  const double root = std::sqrt(one_minus);
  const double k1 = -params.ej1;
  const double k2 = -4.0 * params.ej2;
  const double k = k1 + k2 * root * std::cos(state.phi);
  const double u = params.dipole * drive.value(t) - params.charging * state.n;

  const double dn = 2.0 * k * root * std::sin(state.phi);
  const double dphi = -2.0 * u - 2.0 * k * state.n * std::cos(state.phi) / root;
  return {dn, dphi};
}

std::pair<double, double> charge_flux_rhs(const ChargeFluxState& state,
                                          const DynamicsParams& params, const DriveSpec& drive,
                                          double t) {
  // Hamilton's equations for H below, with the conjugate pair carrying a
  // factor 2 from the half-charge/phase normalization:
  //   dq/dt = -2 dH/dphi,  dphi/dt = +2 dH/dq.
  const double q = state.q, phi = state.phi_flux;
  const double one_minus = 1.0 - q * q;
  if (one_minus < 1e-9)
    throw SingularityError("charge_flux_rhs: |q| too close to the transfer limit");
  const double root = std::sqrt(one_minus);
  const double s = std::sin(phi), c = std::cos(phi);

  const double dq = -2.0 * (params.ej1 * root * s + 4.0 * params.ej2 * one_minus * c * s);
  const double dphi = 2.0 * (-params.dipole * drive.value(t) + params.charging * q +
                             params.ej1 * q * c / root + 4.0 * params.ej2 * q * c * c);
  return {dq, dphi};
}

double hamiltonian_energy(const ChargeFluxState& state, const DynamicsParams& params,
                          const DriveSpec& drive, double t) {
  const double q = state.q, phi = state.phi_flux;
  const double one_minus = 1.0 - q * q;
  const double c = std::cos(phi);
  return -params.dipole * drive.value(t) * q + 0.5 * params.charging * q * q -
         params.ej1 * std::sqrt(std::max(0.0, one_minus)) * c -
         2.0 * params.ej2 * one_minus * c * c;
}

double hamiltonian_energy(const TwoModeState& state, const DynamicsParams& params,
                          const DriveSpec& drive, double t) {
  // Phase-free evaluation: sqrt(1-n^2) cos(phi) = 2 Re(conj(amp_l) amp_r).
  const double n = std::norm(state.amp_l) - std::norm(state.amp_r);
  const double cos_term = 2.0 * (std::conj(state.amp_l) * state.amp_r).real();
  return -params.dipole * drive.value(t) * n + 0.5 * params.charging * n * n -
         params.ej1 * cos_term - 2.0 * params.ej2 * cos_term * cos_term;
}

namespace {

template <typename State, typename Rhs>
State rk4_step(const State& y, double t, double dt, const Rhs& rhs) {
  const auto k1 = rhs(y, t);
  const auto k2 = rhs(y + k1 * (dt / 2.0), t + dt / 2.0);
  const auto k3 = rhs(y + k2 * (dt / 2.0), t + dt / 2.0);
  const auto k4 = rhs(y + k3 * dt, t + dt);
  return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

struct Vec4 {
  double a = 0, b = 0, c = 0, d = 0;
  Vec4 operator+(const Vec4& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Vec4 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
};

struct Vec2 {
  double a = 0, b = 0;
  Vec2 operator+(const Vec2& o) const { return {a + o.a, b + o.b}; }
  Vec2 operator*(double s) const { return {a * s, b * s}; }
};

long step_count(const IntegrateOptions& options) {
  if (!(options.dt > 0)) throw ConfigError("dynamics: dt must be positive");
  if (!(options.t_end > 0)) throw ConfigError("dynamics: t_end must be positive");
  const double raw = options.t_end / options.dt;
  const long steps = static_cast<long>(std::llround(raw));
  if (steps < 1 || std::abs(raw - static_cast<double>(steps)) > 1e-6 * std::max(1.0, raw))
    throw ConfigError("dynamics: t_end must be an integral number of steps");
  return steps;
}

}  // namespace

Trajectory integrate(const TwoModeState& initial, const DynamicsParams& params,
                     const DriveSpec& drive, const IntegrateOptions& options) {
  const long steps = step_count(options);
  Trajectory traj;
  traj.form = StateForm::Complex;

  auto rhs = [&](const Vec4& y, double t) {
    TwoModeState s;
    s.amp_r = {y.a, y.b};
    s.amp_l = {y.c, y.d};
    const TwoModeDerivative d = two_mode_rhs(s, params, drive, t);
    return Vec4{d.amp_r.real(), d.amp_r.imag(), d.amp_l.real(), d.amp_l.imag()};
  };

  Vec4 y{initial.amp_r.real(), initial.amp_r.imag(), initial.amp_l.real(), initial.amp_l.imag()};
  double t = 0;
  auto record = [&]() {
    TwoModeState s;
    s.amp_r = {y.a, y.b};
    s.amp_l = {y.c, y.d};
    traj.t.push_back(t);
    traj.amp_r.push_back(s.amp_r);
    traj.amp_l.push_back(s.amp_l);
    traj.norm.push_back(std::norm(s.amp_r) + std::norm(s.amp_l));
    traj.n.push_back(std::norm(s.amp_l) - std::norm(s.amp_r));
    const double ar = std::abs(s.amp_r), al = std::abs(s.amp_l);
    traj.phi.push_back(ar < kOccupationFloor || al < kOccupationFloor
                           ? std::numeric_limits<double>::quiet_NaN()
                           : wrap_angle(std::arg(s.amp_r) - std::arg(s.amp_l)));
    traj.energy.push_back(hamiltonian_energy(s, params, drive, t));
  };

  record();
  for (long i = 0; i < steps; ++i) {
    y = rk4_step(y, t, options.dt, rhs);
    if (options.renormalize) {
      const double norm = std::sqrt(y.a * y.a + y.b * y.b + y.c * y.c + y.d * y.d);
      if (norm > 0) y = y * (1.0 / norm);
    }
    t = static_cast<double>(i + 1) * options.dt;
    record();
  }
  return traj;
}

namespace {

Trajectory integrate_polar(StateForm form, double n0, double phi0, const DynamicsParams& params,
                           const DriveSpec& drive, const IntegrateOptions& options) {
  const long steps = step_count(options);
  Trajectory traj;
  traj.form = form;

  auto rhs = [&](const Vec2& y, double t) {
    std::pair<double, double> d;
    if (form == StateForm::Madelung) {
      d = madelung_rhs({y.a, y.b}, params, drive, t);
    } else {
      d = charge_flux_rhs({y.a, y.b}, params, drive, t);
    }
    return Vec2{d.first, d.second};
  };

  Vec2 y{n0, phi0};
  double t = 0;
  auto record = [&]() {
    traj.t.push_back(t);
    traj.n.push_back(y.a);
    traj.phi.push_back(y.b);
    traj.energy.push_back(hamiltonian_energy(ChargeFluxState{y.a, y.b}, params, drive, t));
  };

  record();
  for (long i = 0; i < steps; ++i) {
    y = rk4_step(y, t, options.dt, rhs);
    t = static_cast<double>(i + 1) * options.dt;
    record();
  }
  return traj;
}

}  // namespace

Trajectory integrate(const MadelungState& initial, const DynamicsParams& params,
                     const DriveSpec& drive, const IntegrateOptions& options) {
  return integrate_polar(StateForm::Madelung, initial.n, initial.phi, params, drive, options);
}

Trajectory integrate(const ChargeFluxState& initial, const DynamicsParams& params,
                     const DriveSpec& drive, const IntegrateOptions& options) {
  return integrate_polar(StateForm::ChargeFlux, initial.q, initial.phi_flux, params, drive,
                         options);
}

double cpr_current(double phi, double ic1_bar, double ic2_bar) {
  return ic1_bar * std::sin(phi) + ic2_bar * std::sin(2.0 * phi);
}

GroundState classify_ground_state(double ej1_bar, double ej2_bar) {
  if (!(ej1_bar > 0) || !(ej2_bar < 0))
    throw std::invalid_argument("classify_ground_state: expects ej1 > 0 and ej2 < 0");
  GroundState g;
  const double ratio = -ej1_bar / (4.0 * ej2_bar);  // positive in this regime
  if (ratio >= 1.0) {
    g.trivial = true;
    g.phi_star = 0.0;
    g.degenerate = ratio == 1.0;
  } else {
    g.trivial = false;
    g.phi_star = std::acos(ratio);
  }
  return g;
}

QubitExpansion qubit_expansion(const JunctionParams& params, const DriveSpec& drive) {
  if (!params.c_j_bar || !params.norm_bar || !params.d_bar)
    throw GeometryError("qubit_expansion: capacitance block requires finite electrodes");

  QubitExpansion q;
  const double norm = *params.norm_bar;
  q.charging = norm * norm / (16.0 * *params.c_j_bar);
  q.dipole = *params.d_bar;
  q.ej1 = params.ej1_bar;
  q.ej2 = params.ej2_bar;
  // The occupation-dependent tunneling corrections contribute at most
  // |ej1|/2 + 2|ej2| to the q^2 coefficient.
  q.charging_dominant = q.charging > std::abs(q.ej1) / 2.0 + 2.0 * std::abs(q.ej2);

  const double drive_coeff = *params.norm_bar * *params.d_bar / 2.0;
  std::ostringstream os;
  os << "H0 = -(" << format_double(q.ej1) << ") cos(phi)";
  if (q.ej2 != 0.0) os << " - (" << format_double(q.ej2) << ") cos(2 phi)";
  os << "\n";
  os << "H1 = -(" << format_double(drive_coeff) << ") v(t) q\n";
  os << "H2 = [" << format_double(q.charging);
  if (q.ej1 != 0.0) os << " + (" << format_double(q.ej1 / 2.0) << ") cos(phi)";
  if (q.ej2 != 0.0)
    os << " + (" << format_double(q.ej2) << ") (1 + cos(2 phi))";
  os << "] q^2\n";
  os << "charging term " << (q.charging_dominant ? "dominates" : "does not dominate")
     << " the tunneling corrections";
  if (drive.kind == DriveSpec::Kind::Constant)
    os << "\nconstant drive: d(phi)/dt = " << format_double(-2.0 * drive_coeff * drive.amplitude)
       << " at zero imbalance";
  q.report = os.str();
  return q;
}

}  // namespace mesojj
