#pragma once

#include <cstddef>
#include <vector>

namespace mesojj {

// General banded matrix with kl sub- and ku superdiagonals, stored
// column-wise in the usual band layout with kl extra rows so that partial
// pivoting can fill in. Factor/solve cost is O(n (kl+ku)^2).
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, int kl, int ku);

  std::size_t size() const { return n_; }

  // Element (i, j); j must lie within [i - kl, i + ku] before factorization.
  double& at(std::size_t i, std::size_t j);
  double get(std::size_t i, std::size_t j) const;

  void zero();

  // In-place LU with row partial pivoting. Throws SolverError when a pivot
  // underflows (singular system).
  void factor();

  // Back-substitution after factor(); overwrites rhs with the solution.
  void solve(std::vector<double>& rhs) const;

 private:
  std::size_t n_;
  int kl_, ku_;        // declared bandwidths
  int rows_;           // 2*kl + ku + 1 storage rows
  bool factored_ = false;
  std::vector<double> ab_;      // rows_ x n_, entry (i,j) at [kl+ku+i-j][j]
  std::vector<int> pivot_;

  double& cell(int storage_row, std::size_t col) { return ab_[static_cast<std::size_t>(storage_row) * n_ + col]; }
  const double& cell(int storage_row, std::size_t col) const { return ab_[static_cast<std::size_t>(storage_row) * n_ + col]; }
};

}  // namespace mesojj
