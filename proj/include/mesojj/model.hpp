#pragma once

#include <cstddef>
#include <vector>

namespace mesojj {

// CODATA 2018 SI values.
namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double speed_of_light = 299792458.0;         // m/s
inline constexpr double mu0 = 1.25663706212e-6;               // N/A^2
inline constexpr double eps0 = 8.8541878128e-12;              // F/m
}  // namespace constants

// Condensate carrier parameters. Defaults describe electron pairs with a
// bulk density that puts the magnetic screening length near 100 nm.
struct MaterialSpec {
  double boson_charge = -2.0 * constants::elementary_charge;  // C, signed
  double boson_mass = 2.0 * constants::electron_mass;         // kg
  double bulk_density = 1.41197936e27;                        // 1/m^3
  double cross_section = 1e-14;                               // m^2

  void validate() const;  // throws ConfigError
};

// Characteristic lengths and output prefactors derived from a MaterialSpec.
// xi is the geometric mean of the screening and Compton lengths over 4*pi;
// every nondimensional quantity in this library measures length in xi.
struct ScaleSet {
  double lambda_l = 0;           // m, magnetic screening length
  double lambda_c = 0;           // m, Compton wavelength h/(m c)
  double xi = 0;                 // m
  double current_prefactor = 0;  // A, m c xi sigma / (mu0 |q| lambda_l^3)
  double energy_prefactor = 0;   // J, current_prefactor * hbar / |q|
};

ScaleSet derive_scales(const MaterialSpec& material);

enum class GeometryKind { SemiInfinite, FiniteIslands };

// Electrode layout in units of xi, symmetric about x = 0. The gap occupies
// |x| < gap/2. SemiInfinite electrodes extend to infinity; FiniteIslands
// electrodes have width `island`.
struct Geometry {
  GeometryKind kind = GeometryKind::SemiInfinite;
  double gap = 10.0;     // L / xi, >= 0
  double island = 40.0;  // a / xi, > 0, FiniteIslands only

  void validate() const;  // throws ConfigError
};

// Uniform half-line grid on [0, x_max]; x_max/dx must be integral.
struct Grid {
  double x_max = 0;
  double dx = 0;
  std::vector<double> nodes;

  std::size_t size() const { return nodes.size(); }
};

Grid build_grid(double x_max, double dx);

// Normalized jellium density rho(x)/(q n_s) sampled on the grid; values are
// 0 in vacuum, 1 inside an electrode, and 1/2 on a node that lands exactly on
// an electrode edge (the cell average across the jump — sampling the jump as
// 0 or 1 shifts the effective edge by dx/2 and costs an order of accuracy).
// A zero-width gap has no edge at all and samples as uniform bulk.
struct BackgroundProfile {
  std::vector<double> values;
};

BackgroundProfile sample_background(const Geometry& geometry, const Grid& grid);

}  // namespace mesojj
