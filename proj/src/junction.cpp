#include "mesojj/junction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mesojj/errors.hpp"

namespace mesojj {

namespace {

void require_converged(const ParityPair& pair, const char* who) {
  if (!pair.even.converged || !pair.odd.converged)
    throw std::invalid_argument(std::string(who) + ": pair is not converged");
  const std::size_t n = pair.grid.size();
  if (pair.even.psi.size() != n || pair.odd.psi.size() != n || pair.even.v.size() != n ||
      pair.odd.v.size() != n)
    throw std::invalid_argument(std::string(who) + ": field/grid size mismatch");
}

}  // namespace

double rect_integral(std::span<const double> samples, double dx) {
  if (!(dx > 0)) throw std::invalid_argument("rect_integral: dx must be positive");
  double sum = 0;
  for (double s : samples) sum += s;
  return dx * sum;
}

double trapezoid_integral(std::span<const double> samples, double dx) {
  if (!(dx > 0)) throw std::invalid_argument("trapezoid_integral: dx must be positive");
  if (samples.size() < 2) throw std::invalid_argument("trapezoid_integral: too few samples");
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t j = 1; j + 1 < samples.size(); ++j) sum += samples[j];
  return dx * sum;
}

double full_line_even_integral(std::span<const double> half, double dx) {
  if (!(dx > 0)) throw std::invalid_argument("full_line_even_integral: dx must be positive");
  if (half.size() < 2) throw std::invalid_argument("full_line_even_integral: too few samples");
  double sum = half.front() + half.back();
  for (std::size_t j = 1; j + 1 < half.size(); ++j) sum += 2.0 * half[j];
  return dx * sum;
}

std::vector<double> half_line_derivative(std::span<const double> field, double dx, Parity parity) {
  const std::size_t n = field.size();
  if (n < 3) throw std::invalid_argument("half_line_derivative: too few samples");
  std::vector<double> out(n);
  // Ghost value at -dx is +-field[1] by parity.
  out[0] = parity == Parity::Even ? 0.0 : field[1] / dx;
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (field[j + 1] - field[j - 1]) / (2.0 * dx);
  out[n - 1] = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) / (2.0 * dx);
  return out;
}

Couplings josephson_couplings(const ParityPair& pair) {
  require_converged(pair, "josephson_couplings");
  const std::size_t n = pair.grid.size();
  const auto& pe = pair.even.psi;
  const auto& po = pair.odd.psi;
  const auto& ve = pair.even.v;
  const auto& vo = pair.odd.v;

  // Overlap integrals of the potential difference against the symmetric and
  // antisymmetric density combinations; all integrands are even.
  std::vector<double> sym(n), asym(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double dv = vo[j] - ve[j];
    sym[j] = (po[j] * po[j] + pe[j] * pe[j]) * dv;
    asym[j] = (po[j] * po[j] - pe[j] * pe[j]) * dv;
  }
  const double i1 = full_line_even_integral(sym, pair.grid.dx);
  const double i2 = full_line_even_integral(asym, pair.grid.dx);

  Couplings c;
  c.k1_bar = i1 / 4.0;
  c.k2_bar = i2 / 4.0;
  c.ic1_bar = -i1 / 4.0;
  c.ic2_bar = -i2 / 8.0;
  return c;
}

namespace {

// Full-line sum of squared forward differences, dx * sum((f' at midpoints)^2).
// Both parities contribute symmetric interval squares, so the half-line
// doubles. This is the quadratic form of the solver's own difference
// operator: summing it by parts against the discrete field equations
// reproduces the overlap integrals exactly, which keeps the two routes to
// the tunneling energies consistent down to the solver residual instead of
// the (much larger) O(dx^2) truncation mismatch.
double gradient_form(std::span<const double> field, double dx) {
  double sum = 0;
  for (std::size_t j = 0; j + 1 < field.size(); ++j) {
    const double d = field[j + 1] - field[j];
    sum += d * d;
  }
  return 2.0 * sum / dx;
}

}  // namespace

std::pair<double, double> parity_energies(const ParityPair& pair) {
  const double dx = pair.grid.dx;
  auto energy = [&](const ParitySolution& sol) {
    return gradient_form(sol.psi, dx) + gradient_form(sol.v, dx);
  };
  return {energy(pair.even), energy(pair.odd)};
}

JosephsonEnergies josephson_energies(const ParityPair& pair) {
  require_converged(pair, "josephson_energies");
  const Couplings c = josephson_couplings(pair);

  JosephsonEnergies e;
  e.ej1_bar = -c.k1_bar;
  e.ej2_bar = -c.k2_bar / 4.0;

  const auto [e_even, e_odd] = parity_energies(pair);
  e.ej1_dual_bar = (e_odd - e_even) / 2.0;

  const std::size_t n = pair.grid.size();
  std::vector<double> gap(n);
  for (std::size_t j = 0; j < n; ++j) gap[j] = pair.odd.v[j] - pair.even.v[j];
  e.ej2_dual_bar = -gradient_form(gap, pair.grid.dx) / 8.0;

  // The two routes are algebraically identical in the continuum; gross
  // disagreement means the discrete fields are inconsistent.
  auto rel_gap = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 1e-13 ? std::abs(a - b) / scale : 0.0;
  };
  if (rel_gap(e.ej1_bar, e.ej1_dual_bar) > 1e-2 || rel_gap(e.ej2_bar, e.ej2_dual_bar) > 1e-2)
    throw NumericsError("josephson_energies: dual formulas disagree beyond 1e-2 relative");
  return e;
}

ElectrostaticParams electrostatics(const ParityPair& pair) {
  if (pair.geometry.kind != GeometryKind::FiniteIslands)
    throw GeometryError("electrostatics: junction capacitance needs finite electrodes");
  const std::size_t n = pair.grid.size();
  if (pair.even.psi.size() != n || pair.odd.psi.size() != n)
    throw std::invalid_argument("electrostatics: field/grid size mismatch");
  const double dx = pair.grid.dx;

  // Samples act as cell values on (x_{j-1}, x_j]; every integral below is
  // then evaluated exactly for profiles that are constant on cells, which
  // pins the piecewise-constant limits to machine precision.
  double norm_even = 0, norm_odd = 0, moment = 0;
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = pair.even.psi[j] * pair.odd.psi[j];
  for (std::size_t j = 1; j < n; ++j) {
    norm_even += pair.even.psi[j] * pair.even.psi[j];
    norm_odd += pair.odd.psi[j] * pair.odd.psi[j];
    moment += g[j] * (pair.grid.nodes[j] - 0.5 * dx);
  }
  norm_even *= 2.0 * dx;  // full line: both parities have even |psi|^2
  norm_odd *= 2.0 * dx;
  moment *= dx;

  const double norm = 0.5 * (norm_even + norm_odd);
  if (!(norm > 0)) throw NumericsError("electrostatics: vanishing mode norm");

  // T = int_0^inf g P with P(x) = int_0^x G, G(x) = int_x^inf g: two prefix
  // sweeps. G is piecewise linear and P piecewise quadratic, so the cell
  // integrals close in terms of the nodal prefix values.
  std::vector<double> suffix(n, 0.0);  // G at nodes
  for (std::size_t j = n - 1; j >= 1; --j) suffix[j - 1] = suffix[j] + dx * g[j];
  double t_integral = 0;
  double p_prev = 0;  // P at node j-1
  for (std::size_t j = 1; j < n; ++j) {
    t_integral += g[j] * (p_prev * dx + suffix[j - 1] * dx * dx / 2.0 - g[j] * dx * dx * dx / 6.0);
    p_prev += dx * (suffix[j - 1] + suffix[j]) / 2.0;
  }
  if (!(t_integral > 0))
    throw NumericsError("electrostatics: non-positive interaction integral");

  ElectrostaticParams out;
  out.norm_bar = norm;
  out.d_bar = 4.0 * moment / norm;
  out.c_j_bar = norm * norm / (8.0 * t_integral);
  return out;
}

JunctionParams extract_junction_params(const ParityPair& pair) {
  const Couplings c = josephson_couplings(pair);
  const JosephsonEnergies e = josephson_energies(pair);
  const auto [e_even, e_odd] = parity_energies(pair);

  JunctionParams p;
  p.k1_bar = c.k1_bar;
  p.k2_bar = c.k2_bar;
  p.ic1_bar = c.ic1_bar;
  p.ic2_bar = c.ic2_bar;
  p.ej1_bar = e.ej1_bar;
  p.ej2_bar = e.ej2_bar;
  p.ej1_dual_bar = e.ej1_dual_bar;
  p.ej2_dual_bar = e.ej2_dual_bar;
  p.eplus_bar = e_even;
  p.eminus_bar = e_odd;
  if (pair.geometry.kind == GeometryKind::FiniteIslands) {
    const ElectrostaticParams es = electrostatics(pair);
    p.c_j_bar = es.c_j_bar;
    p.d_bar = es.d_bar;
    p.norm_bar = es.norm_bar;
  }
  return p;
}

}  // namespace mesojj
