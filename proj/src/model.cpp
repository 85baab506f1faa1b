#include "mesojj/model.hpp"

#include <cmath>
#include <numbers>

#include "mesojj/errors.hpp"

namespace mesojj {

void MaterialSpec::validate() const {
  if (!(boson_mass > 0)) throw ConfigError("material: boson mass must be positive");
  if (!(bulk_density > 0)) throw ConfigError("material: bulk density must be positive");
  if (!(cross_section > 0)) throw ConfigError("material: cross section must be positive");
  if (boson_charge == 0 || !std::isfinite(boson_charge))
    throw ConfigError("material: boson charge must be nonzero");
}

ScaleSet derive_scales(const MaterialSpec& material) {
  material.validate();
  const double q = material.boson_charge;
  const double m = material.boson_mass;

  ScaleSet s;
  s.lambda_l = std::sqrt(m / (constants::mu0 * material.bulk_density * q * q));
  s.lambda_c = constants::planck / (m * constants::speed_of_light);
  s.xi = std::sqrt(s.lambda_l * s.lambda_c / (4.0 * std::numbers::pi));
  s.current_prefactor = m * constants::speed_of_light * s.xi * material.cross_section /
                        (constants::mu0 * std::abs(q) * s.lambda_l * s.lambda_l * s.lambda_l);
  s.energy_prefactor = s.current_prefactor * constants::hbar / std::abs(q);
  return s;
}

void Geometry::validate() const {
  if (!(gap >= 0) || !std::isfinite(gap)) throw ConfigError("geometry: gap must be >= 0");
  if (kind == GeometryKind::FiniteIslands && (!(island > 0) || !std::isfinite(island)))
    throw ConfigError("geometry: island width must be positive");
}

Grid build_grid(double x_max, double dx) {
  if (!(dx > 0) || !std::isfinite(dx)) throw ConfigError("grid: dx must be positive");
  if (!(x_max > 0) || !std::isfinite(x_max)) throw ConfigError("grid: x_max must be positive");
  const double ratio = x_max / dx;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("grid: x_max must be an integral multiple of dx");

  Grid grid;
  grid.x_max = x_max;
  grid.dx = dx;
  const auto count = static_cast<std::size_t>(rounded) + 1;
  grid.nodes.resize(count);
  for (std::size_t j = 0; j < count; ++j) grid.nodes[j] = static_cast<double>(j) * dx;
  grid.nodes.back() = x_max;
  return grid;
}

BackgroundProfile sample_background(const Geometry& geometry, const Grid& grid) {
  geometry.validate();
  const double inner = geometry.gap / 2.0;

  // A node sitting exactly on a material edge takes the half value: the jump
  // averages to 1/2 over the node's cell, and anything else biases the edge
  // position by dx/2, degrading downstream quadratures from O(dx^2) to O(dx).
  const auto step_up = [](double x, double edge) {
    const double tol = 1e-9 * std::max(1.0, std::abs(edge));
    if (x > edge + tol) return 1.0;
    if (x < edge - tol) return 0.0;
    return 0.5;
  };

  BackgroundProfile profile;
  profile.values.resize(grid.size(), 0.0);

  if (geometry.kind == GeometryKind::SemiInfinite) {
    if (geometry.gap == 0.0) {
      // No gap, no edge: uniform bulk, including the symmetry node.
      for (auto& v : profile.values) v = 1.0;
      return profile;
    }
    for (std::size_t j = 0; j < grid.size(); ++j)
      profile.values[j] = step_up(grid.nodes[j], inner);
    return profile;
  }

  const double outer = inner + geometry.island;
  if (outer > grid.x_max)
    throw ConfigError("geometry: electrode extends past the end of the grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    // Zero gap: the mirrored islands touch at the origin, so the inner edge
    // disappears (the even extension is continuous there) and node 0 is bulk.
    const double lo = geometry.gap == 0.0 ? 1.0 : step_up(grid.nodes[j], inner);
    profile.values[j] = lo - step_up(grid.nodes[j], outer);
  }
  return profile;
}

}  // namespace mesojj
