#include "mesojj/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mesojj/errors.hpp"

namespace mesojj {

BandedMatrix::BandedMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), rows_(2 * kl + ku + 1) {
  if (kl < 0 || ku < 0 || n == 0) throw std::invalid_argument("BandedMatrix: bad shape");
  ab_.assign(static_cast<std::size_t>(rows_) * n_, 0.0);
  pivot_.assign(n_, 0);
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  const auto di = static_cast<long>(i), dj = static_cast<long>(j);
  if (dj - di > ku_ || di - dj > kl_) throw std::out_of_range("BandedMatrix::at outside band");
  return cell(kl_ + ku_ + static_cast<int>(di - dj), j);
}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
  const auto di = static_cast<long>(i), dj = static_cast<long>(j);
  // After factorization the upper bandwidth grows to kl+ku.
  if (dj - di > kl_ + ku_ || di - dj > kl_) return 0.0;
  return cell(kl_ + ku_ + static_cast<int>(di - dj), j);
}

void BandedMatrix::zero() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factored_ = false;
}

void BandedMatrix::factor() {
  // Band LU with row partial pivoting; fill-in stays within kl+ku upper
  // diagonals, which the storage already reserves.
  const long n = static_cast<long>(n_);
  const int band = kl_ + ku_;
  for (long k = 0; k < n; ++k) {
    const long lm = std::min<long>(kl_, n - 1 - k);
    long p = k;
    double pmax = std::abs(cell(kl_ + ku_, k));
    for (long i = k + 1; i <= k + lm; ++i) {
      const double v = std::abs(cell(kl_ + ku_ + static_cast<int>(i - k), k));
      if (v > pmax) {
        pmax = v;
        p = i;
      }
    }
    if (!(pmax > 0) || !std::isfinite(pmax))
      throw SolverError("banded LU: singular pivot at column " + std::to_string(k), 0.0,
                        static_cast<int>(k));
    pivot_[k] = static_cast<int>(p);
    const long jmax = std::min<long>(n - 1, k + band);
    if (p != k) {
      for (long j = k; j <= jmax; ++j)
        std::swap(cell(kl_ + ku_ + static_cast<int>(k - j), j),
                  cell(kl_ + ku_ + static_cast<int>(p - j), j));
    }
    const double piv = cell(kl_ + ku_, k);
    for (long i = k + 1; i <= k + lm; ++i) {
      double& m = cell(kl_ + ku_ + static_cast<int>(i - k), k);
      m /= piv;
      for (long j = k + 1; j <= jmax; ++j)
        cell(kl_ + ku_ + static_cast<int>(i - j), j) -=
            m * cell(kl_ + ku_ + static_cast<int>(k - j), j);
    }
  }
  factored_ = true;
}

void BandedMatrix::solve(std::vector<double>& rhs) const {
  if (!factored_) throw std::logic_error("BandedMatrix::solve before factor");
  if (rhs.size() != n_) throw std::invalid_argument("BandedMatrix::solve size mismatch");
  const long n = static_cast<long>(n_);
  // Forward: apply the recorded permutations and the unit-lower factors.
  for (long k = 0; k < n; ++k) {
    const long p = pivot_[k];
    if (p != k) std::swap(rhs[k], rhs[p]);
    const long lm = std::min<long>(kl_, n - 1 - k);
    for (long i = k + 1; i <= k + lm; ++i)
      rhs[i] -= cell(kl_ + ku_ + static_cast<int>(i - k), k) * rhs[k];
  }
  // Back substitution on U.
  const int band = kl_ + ku_;
  for (long i = n - 1; i >= 0; --i) {
    double sum = rhs[i];
    const long jmax = std::min<long>(n - 1, i + band);
    for (long j = i + 1; j <= jmax; ++j)
      sum -= cell(kl_ + ku_ + static_cast<int>(i - j), j) * rhs[j];
    rhs[i] = sum / cell(kl_ + ku_, i);
  }
}

}  // namespace mesojj
