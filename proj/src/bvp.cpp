#include "mesojj/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mesojj/banded.hpp"
#include "mesojj/errors.hpp"

namespace mesojj {

namespace {

double max_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Row layout: unknowns and residual rows interleave as
//   u[2j] = psi_j, u[2j+1] = v_j,
// which keeps the Jacobian inside a 5-diagonal band (kl = ku = 2).
//
// Node 0 rows impose the symmetry conditions by ghost elimination
// (psi_{-1} = +-psi_1, v_{-1} = v_1). The outer node carries the far-field
// data: psi = 1, v = 0 for semi-infinite electrodes; for finite electrodes
// the order parameter vanishes and the potential keeps zero slope, so the
// outer potential row stays the ghost-eliminated field equation.
void assemble(const std::vector<double>& psi, const std::vector<double>& v, Parity parity,
              const BackgroundProfile& background, const Grid& grid, const Geometry& geometry,
              std::vector<double>& res, BandedMatrix* jac) {
  const std::size_t n = grid.size();
  if (psi.size() != n || v.size() != n || background.values.size() != n)
    throw std::invalid_argument("bvp residual: field/grid size mismatch");
  if (n < 3) throw ConfigError("grid: at least 3 nodes required");

  const double inv = 1.0 / (grid.dx * grid.dx);
  const auto& rho = background.values;
  res.assign(2 * n, 0.0);
  if (jac) jac->zero();

  const std::size_t last = n - 1;
  const bool semi = geometry.kind == GeometryKind::SemiInfinite;

  // symmetry node
  if (parity == Parity::Even) {
    res[0] = -(2.0 * psi[1] - 2.0 * psi[0]) * inv + v[0] * psi[0];
    if (jac) {
      jac->at(0, 0) = 2.0 * inv + v[0];
      jac->at(0, 2) = -2.0 * inv;
      jac->at(0, 1) = psi[0];
    }
  } else {
    res[0] = psi[0];
    if (jac) jac->at(0, 0) = 1.0;
  }
  res[1] = 2.0 * (2.0 * v[1] - 2.0 * v[0]) * inv + psi[0] * psi[0] - rho[0];
  if (jac) {
    jac->at(1, 1) = -4.0 * inv;
    jac->at(1, 3) = 4.0 * inv;
    jac->at(1, 0) = 2.0 * psi[0];
  }

  for (std::size_t j = 1; j < last; ++j) {
    const std::size_t rp = 2 * j, rv = 2 * j + 1;
    res[rp] = -(psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) * inv + v[j] * psi[j];
    res[rv] = 2.0 * (v[j + 1] - 2.0 * v[j] + v[j - 1]) * inv + psi[j] * psi[j] - rho[j];
    if (jac) {
      jac->at(rp, 2 * (j - 1)) = -inv;
      jac->at(rp, 2 * j) = 2.0 * inv + v[j];
      jac->at(rp, 2 * (j + 1)) = -inv;
      jac->at(rp, 2 * j + 1) = psi[j];
      jac->at(rv, 2 * (j - 1) + 1) = 2.0 * inv;
      jac->at(rv, 2 * j + 1) = -4.0 * inv;
      jac->at(rv, 2 * (j + 1) + 1) = 2.0 * inv;
      jac->at(rv, 2 * j) = 2.0 * psi[j];
    }
  }

  const std::size_t rp = 2 * last, rv = 2 * last + 1;
  if (semi) {
    res[rp] = psi[last] - 1.0;
    res[rv] = v[last];
    if (jac) {
      jac->at(rp, rp) = 1.0;
      jac->at(rv, rv) = 1.0;
    }
  } else {
    res[rp] = psi[last];
    res[rv] = 2.0 * (2.0 * v[last - 1] - 2.0 * v[last]) * inv + psi[last] * psi[last] - rho[last];
    if (jac) {
      jac->at(rp, rp) = 1.0;
      jac->at(rv, rv) = -4.0 * inv;
      jac->at(rv, 2 * (last - 1) + 1) = 4.0 * inv;
      jac->at(rv, rp) = 2.0 * psi[last];
    }
  }
}

void bulk_guess(const Geometry& geometry, const Grid& grid, const BackgroundProfile& background,
                std::vector<double>& psi, std::vector<double>& v) {
  const std::size_t n = grid.size();
  v.assign(n, 0.0);
  if (geometry.kind == GeometryKind::SemiInfinite) {
    psi.assign(n, 1.0);
  } else {
    // Condensate where the electrode is; the far-field row wants zero anyway.
    psi = background.values;
  }
}

}  // namespace

void SolverOptions::validate(std::size_t nodes) const {
  if (!(tol > 0)) throw ConfigError("solver: tol must be positive");
  if (max_iter < 1) throw ConfigError("solver: max_iter must be >= 1");
  if (!(damping > 0) || damping > 1.0) throw ConfigError("solver: damping must lie in (0, 1]");
  if (!psi_guess.empty() && psi_guess.size() != nodes)
    throw ConfigError("solver: psi guess size does not match the grid");
  if (!v_guess.empty() && v_guess.size() != nodes)
    throw ConfigError("solver: v guess size does not match the grid");
  if (psi_guess.empty() != v_guess.empty())
    throw ConfigError("solver: custom guess must provide both fields");
}

std::vector<double> residual(const std::vector<double>& psi, const std::vector<double>& v,
                             Parity parity, const BackgroundProfile& background,
                             const Grid& grid, const Geometry& geometry) {
  std::vector<double> res;
  assemble(psi, v, parity, background, grid, geometry, res, nullptr);
  return res;
}

std::vector<double> jacobian_apply(const std::vector<double>& psi, const std::vector<double>& v,
                                   Parity parity, const BackgroundProfile& background,
                                   const Grid& grid, const Geometry& geometry,
                                   const std::vector<double>& direction) {
  const std::size_t n = grid.size();
  if (direction.size() != 2 * n) throw std::invalid_argument("jacobian_apply: bad direction size");
  std::vector<double> res;
  BandedMatrix jac(2 * n, 2, 2);
  assemble(psi, v, parity, background, grid, geometry, res, &jac);
  std::vector<double> out(2 * n, 0.0);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const std::size_t j0 = i >= 2 ? i - 2 : 0;
    const std::size_t j1 = std::min(2 * n - 1, i + 2);
    double sum = 0;
    for (std::size_t j = j0; j <= j1; ++j) sum += jac.get(i, j) * direction[j];
    out[i] = sum;
  }
  return out;
}

ParitySolution solve_parity(Parity parity, const Geometry& geometry, const Grid& grid,
                            const SolverOptions& options) {
  geometry.validate();
  options.validate(grid.size());
  const BackgroundProfile background = sample_background(geometry, grid);
  const std::size_t n = grid.size();

  std::vector<double> psi, v;
  if (options.psi_guess.empty()) {
    bulk_guess(geometry, grid, background, psi, v);
  } else {
    psi = options.psi_guess;
    v = options.v_guess;
  }
  if (parity == Parity::Odd) psi[0] = 0.0;

  std::vector<double> res, trial_res, delta(2 * n), trial_psi(n), trial_v(n);
  BandedMatrix jac(2 * n, 2, 2);

  assemble(psi, v, parity, background, grid, geometry, res, nullptr);
  double rn = max_norm(res);

  int iter = 0;
  for (; iter < options.max_iter && rn > options.tol; ++iter) {
    assemble(psi, v, parity, background, grid, geometry, res, &jac);
    try {
      jac.factor();
    } catch (const SolverError&) {
      throw SolverError("Newton: singular Jacobian", rn, iter);
    }
    for (std::size_t i = 0; i < 2 * n; ++i) delta[i] = -res[i];
    jac.solve(delta);

    // Backtracking on the residual max-norm: halve the step until it
    // decreases. Near the solution the full step always wins.
    double step = options.damping;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t j = 0; j < n; ++j) {
        trial_psi[j] = psi[j] + step * delta[2 * j];
        trial_v[j] = v[j] + step * delta[2 * j + 1];
      }
      assemble(trial_psi, trial_v, parity, background, grid, geometry, trial_res, nullptr);
      const double trial_rn = max_norm(trial_res);
      if (trial_rn < rn) {
        psi.swap(trial_psi);
        v.swap(trial_v);
        rn = trial_rn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) throw SolverError("Newton: line search stalled", rn, iter + 1);
  }

  if (rn > options.tol)
    throw SolverError("Newton: no convergence within max_iter", rn, iter);

  // A few undamped polish steps push the residual from just-under-tol to
  // the double-precision floor. Energy differences of near-degenerate
  // parity states cancel ~9 digits, so the downstream extraction needs
  // every digit the solution can carry.
  for (int extra = 0; extra < 4 && rn > 1e-14; ++extra) {
    assemble(psi, v, parity, background, grid, geometry, res, &jac);
    try {
      jac.factor();
    } catch (const SolverError&) {
      break;
    }
    for (std::size_t i = 0; i < 2 * n; ++i) delta[i] = -res[i];
    jac.solve(delta);
    for (std::size_t j = 0; j < n; ++j) {
      trial_psi[j] = psi[j] + delta[2 * j];
      trial_v[j] = v[j] + delta[2 * j + 1];
    }
    assemble(trial_psi, trial_v, parity, background, grid, geometry, trial_res, nullptr);
    const double trial_rn = max_norm(trial_res);
    if (trial_rn >= rn) break;
    psi.swap(trial_psi);
    v.swap(trial_v);
    rn = trial_rn;
    ++iter;
  }

  // Sign convention: the order parameter is non-negative toward the outer
  // end (the field equations are invariant under psi -> -psi).
  std::size_t anchor = n - 1;
  while (anchor > 0 && std::abs(psi[anchor]) < 1e-8) --anchor;
  if (psi[anchor] < 0)
    for (auto& p : psi) p = -p;

  ParitySolution sol;
  sol.parity = parity;
  sol.psi = std::move(psi);
  sol.v = std::move(v);
  sol.residual_norm = rn;
  sol.iterations = iter;
  sol.converged = true;
  return sol;
}

ParityPair solve_pair(const Geometry& geometry, const Grid& grid, const SolverOptions& options) {
  ParityPair pair;
  pair.geometry = geometry;
  pair.grid = grid;
  pair.even = solve_parity(Parity::Even, geometry, grid, options);
  pair.odd = solve_parity(Parity::Odd, geometry, grid, options);

  const std::size_t n = grid.size();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  pair.psi_r.resize(n);
  pair.psi_l.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    pair.psi_r[j] = (pair.even.psi[j] + pair.odd.psi[j]) * inv_sqrt2;
    pair.psi_l[j] = (pair.even.psi[j] - pair.odd.psi[j]) * inv_sqrt2;
  }
  return pair;
}

FullLineBasis left_right_basis(const ParityPair& pair) {
  const std::size_t n = pair.grid.size();
  if (pair.even.psi.size() != n || pair.odd.psi.size() != n)
    throw std::invalid_argument("left_right_basis: incomplete pair");
  const std::size_t total = 2 * n - 1;

  FullLineBasis basis;
  basis.x.resize(total);
  basis.psi_even.resize(total);
  basis.psi_odd.resize(total);
  basis.v_even.resize(total);
  basis.v_odd.resize(total);
  basis.psi_l.resize(total);
  basis.psi_r.resize(total);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < total; ++k) {
    const long offset = static_cast<long>(k) - static_cast<long>(n - 1);
    const std::size_t j = static_cast<std::size_t>(std::labs(offset));
    const double sign = offset < 0 ? -1.0 : 1.0;
    basis.x[k] = sign * pair.grid.nodes[j];
    basis.psi_even[k] = pair.even.psi[j];
    basis.psi_odd[k] = sign * pair.odd.psi[j];
    basis.v_even[k] = pair.even.v[j];
    basis.v_odd[k] = pair.odd.v[j];
    basis.psi_r[k] = (basis.psi_even[k] + basis.psi_odd[k]) * inv_sqrt2;
    basis.psi_l[k] = (basis.psi_even[k] - basis.psi_odd[k]) * inv_sqrt2;
  }
  return basis;
}

}  // namespace mesojj
