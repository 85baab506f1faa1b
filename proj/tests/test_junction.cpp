#include "mesojj/junction.hpp"

#include <cmath>
#include <vector>

#include "mesojj/errors.hpp"
#include "checks.hpp"

using namespace mesojj;

namespace {

ParityPair synthetic_pair(const Geometry& geo, const Grid& grid, std::vector<double> psi_even,
                          std::vector<double> psi_odd, std::vector<double> v_even,
                          std::vector<double> v_odd) {
  ParityPair pair;
  pair.geometry = geo;
  pair.grid = grid;
  pair.even.parity = Parity::Even;
  pair.even.psi = std::move(psi_even);
  pair.even.v = std::move(v_even);
  pair.even.converged = true;
  pair.odd.parity = Parity::Odd;
  pair.odd.psi = std::move(psi_odd);
  pair.odd.v = std::move(v_odd);
  pair.odd.converged = true;
  return pair;
}

void quadrature_rules() {
  const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};
  CHECK_NEAR(rect_integral(ones, 0.25), 1.0, 1e-15);

  const std::vector<double> ramp{0.0, 0.25, 0.5, 0.75};
  CHECK_NEAR(rect_integral(ramp, 0.25), 0.375, 1e-15);

  // Left-rule error for a smooth decaying integrand stays O(dx).
  std::vector<double> decay;
  for (double x = 0.0; x < 100.0; x += 0.25) decay.push_back(std::exp(-x));
  CHECK(std::abs(rect_integral(decay, 0.25) - 1.0) < 0.25);
  CHECK(std::abs(rect_integral(decay, 0.25) - 1.0) > 0.01);  // genuinely first order

  const std::vector<double> ramp5{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK_NEAR(trapezoid_integral(ramp5, 0.25), 0.5, 1e-15);

  CHECK_THROWS(std::invalid_argument, rect_integral(ones, 0.0));
  CHECK_THROWS(std::invalid_argument, trapezoid_integral(std::vector<double>{1.0}, 0.25));
}

void full_line_quadrature() {
  const std::vector<double> ones{1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK_NEAR(full_line_even_integral(ones, 0.25), 2.0, 1e-15);

  std::vector<double> squares;
  for (double x = 0.0; x <= 1.0 + 1e-12; x += 0.25) squares.push_back(x * x);
  CHECK_NEAR(full_line_even_integral(squares, 0.25), 2.0 / 3.0, 0.05);

  CHECK_THROWS(std::invalid_argument, full_line_even_integral(std::vector<double>{1.0}, 0.25));
}

void nodal_derivatives() {
  const double dx = 0.01;
  std::vector<double> even_f, odd_f;
  std::vector<double> xs;
  for (double x = 0.0; x <= 2.0 + 1e-12; x += dx) {
    xs.push_back(x);
    even_f.push_back(std::cos(x));
    odd_f.push_back(std::sin(x));
  }

  const std::vector<double> de = half_line_derivative(even_f, dx, Parity::Even);
  CHECK(de[0] == 0.0);  // parity ghost kills the symmetric difference
  for (std::size_t j = 1; j < xs.size(); ++j) CHECK_NEAR(de[j], -std::sin(xs[j]), 1e-4);

  const std::vector<double> d_odd = half_line_derivative(odd_f, dx, Parity::Odd);
  for (std::size_t j = 0; j < xs.size(); ++j) CHECK_NEAR(d_odd[j], std::cos(xs[j]), 1e-4);

  CHECK_THROWS(std::invalid_argument,
               half_line_derivative(std::vector<double>{1.0, 2.0}, dx, Parity::Even));
}

void identical_potentials_decouple() {
  const Grid grid = build_grid(20.0, 0.25);
  Geometry geo;
  geo.gap = 4.0;
  std::vector<double> psi_e(grid.size()), psi_o(grid.size()), v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    psi_e[j] = std::tanh(grid.nodes[j]);
    psi_o[j] = std::tanh(0.7 * grid.nodes[j]);
    v[j] = std::exp(-grid.nodes[j]);
  }
  const ParityPair pair = synthetic_pair(geo, grid, psi_e, psi_o, v, v);
  const Couplings c = josephson_couplings(pair);
  CHECK(c.ic1_bar == 0.0);
  CHECK(c.ic2_bar == 0.0);
  CHECK(c.k1_bar == 0.0);
  CHECK(c.k2_bar == 0.0);

  // With equal potentials but different amplitudes the energy route and the
  // coupling route cannot agree; the consistency gate must trip.
  CHECK_THROWS(NumericsError, josephson_energies(pair));
}

void unconverged_pair_rejected() {
  const Grid grid = build_grid(10.0, 0.5);
  Geometry geo;
  ParityPair pair = synthetic_pair(geo, grid, std::vector<double>(grid.size(), 1.0),
                                   std::vector<double>(grid.size(), 1.0),
                                   std::vector<double>(grid.size(), 0.0),
                                   std::vector<double>(grid.size(), 0.0));
  pair.odd.converged = false;
  CHECK_THROWS(std::invalid_argument, josephson_couplings(pair));
  CHECK_THROWS(std::invalid_argument, josephson_energies(pair));
}

void box_profile_closed_forms() {
  // Piecewise-constant mode profiles reproduce the closed-form dipole length
  // and capacitance exactly; no solver involved.
  for (double dx : {0.25, 0.1}) {
    const Grid grid = build_grid(20.0, dx);
    Geometry geo;
    geo.kind = GeometryKind::FiniteIslands;
    geo.gap = 4.0;
    geo.island = 10.0;
    const double inner = 2.0, outer = 12.0;
    std::vector<double> box(grid.size(), 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (grid.nodes[j] > inner + 1e-12 && grid.nodes[j] <= outer + 1e-12) box[j] = 1.0;

    const ParityPair pair = synthetic_pair(geo, grid, box, box, std::vector<double>(grid.size()),
                                           std::vector<double>(grid.size()));
    const ElectrostaticParams ep = electrostatics(pair);
    CHECK_REL(ep.norm_bar, 2.0 * geo.island, 1e-12);
    CHECK_REL(ep.d_bar, geo.gap + geo.island, 1e-12);
    CHECK_REL(ep.c_j_bar, 1.0 / (geo.gap + 2.0 * geo.island / 3.0), 1e-12);
  }
}

void electrostatics_errors() {
  const Grid grid = build_grid(10.0, 0.5);
  Geometry half;
  const ParityPair open_pair =
      synthetic_pair(half, grid, std::vector<double>(grid.size(), 1.0),
                     std::vector<double>(grid.size(), 1.0), std::vector<double>(grid.size()),
                     std::vector<double>(grid.size()));
  CHECK_THROWS(GeometryError, electrostatics(open_pair));

  Geometry islands;
  islands.kind = GeometryKind::FiniteIslands;
  islands.gap = 2.0;
  islands.island = 4.0;
  const ParityPair empty = synthetic_pair(islands, grid, std::vector<double>(grid.size(), 0.0),
                                          std::vector<double>(grid.size(), 0.0),
                                          std::vector<double>(grid.size()),
                                          std::vector<double>(grid.size()));
  CHECK_THROWS(NumericsError, electrostatics(empty));
}

void solved_junction_frozen_values() {
  const Grid grid = build_grid(100.0, 0.25);
  Geometry geo;
  geo.gap = 10.0;
  const ParityPair pair = solve_pair(geo, grid);

  // Spot values of the solved fields; any solver change that moves physics
  // shows up here first.
  CHECK_REL(pair.even.psi[0], 0.1096505294589881, 1e-9);
  CHECK_REL(pair.even.v[0], 0.26946430044497655, 1e-9);
  CHECK_REL(pair.odd.v[0], 0.21328722404717387, 1e-9);

  const JunctionParams p = extract_junction_params(pair);
  CHECK_REL(p.ej1_bar, 7.366655840073941e-3, 1e-9);
  CHECK_REL(p.ej2_bar, -1.5236983058401537e-4, 1e-9);
  CHECK_REL(p.eplus_bar, 0.4058545528288593, 1e-9);
  CHECK_REL(p.eminus_bar, 0.42058786450900554, 1e-9);

  // Structural identities between the outputs.
  CHECK(p.ic1_bar == p.ej1_bar);
  CHECK_REL(p.ic2_bar, 2.0 * p.ej2_bar, 1e-14);
  CHECK_REL(p.k1_bar, -p.ej1_bar, 1e-14);
  CHECK_REL(p.k2_bar, -4.0 * p.ej2_bar, 1e-14);

  // Signs and ordering.
  CHECK(p.ej1_bar > 0);
  CHECK(p.ej2_bar < 0);
  CHECK(p.eminus_bar >= p.eplus_bar);
  CHECK(p.ej2_dual_bar <= 0.0);

  // Both routes to each tunneling energy agree far inside the contract band.
  CHECK_REL(p.ej1_bar, p.ej1_dual_bar, 1e-9);
  CHECK_REL(p.ej2_bar, p.ej2_dual_bar, 1e-9);

  // First-harmonic magnitude sits on the published decay line.
  CHECK_NEAR(std::log(std::abs(p.ic1_bar)), -0.507 * 10.0 + 0.155, 0.1);

  // Half-infinite electrodes expose no capacitance block.
  CHECK(!p.c_j_bar && !p.d_bar && !p.norm_bar);
}

void dual_routes_track_at_large_separation() {
  const Grid grid = build_grid(100.0, 0.25);
  Geometry geo;
  geo.gap = 40.0;
  const ParityPair pair = solve_pair(geo, grid);
  const JunctionParams p = extract_junction_params(pair);
  // Near-degenerate parity states: the energies cancel nine digits, so this
  // is the stress case for the 1e-3 consistency contract.
  CHECK_REL(p.ej1_bar, p.ej1_dual_bar, 1e-3);
  CHECK_REL(p.ej2_bar, p.ej2_dual_bar, 1e-3);
  CHECK(p.ej1_bar > 0);
  CHECK(p.ej2_bar < 0);
}

void solved_islands_dipole() {
  const Grid grid = build_grid(100.0, 0.25);
  Geometry geo;
  geo.kind = GeometryKind::FiniteIslands;
  geo.gap = 10.0;
  geo.island = 40.0;
  const ParityPair pair = solve_pair(geo, grid);
  const JunctionParams p = extract_junction_params(pair);
  CHECK(p.c_j_bar && p.d_bar && p.norm_bar);
  // Wide islands approach the box limit d = L + a.
  CHECK(std::abs(*p.d_bar - 50.0) < 0.05 * 50.0);
  CHECK(*p.c_j_bar > 0);
  CHECK(*p.norm_bar > 0);
  CHECK(p.ej1_bar > 0);
  CHECK(p.ej2_bar < 0);
}

}  // namespace

int main() {
  quadrature_rules();
  full_line_quadrature();
  nodal_derivatives();
  identical_potentials_decouple();
  unconverged_pair_rejected();
  box_profile_closed_forms();
  electrostatics_errors();
  solved_junction_frozen_values();
  dual_routes_track_at_large_separation();
  solved_islands_dipole();
  return test_summary("test_junction");
}
