#include "thinfilm/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "thinfilm/error.hpp"

namespace thinfilm {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), data_(n * (kl + ku + 1), 0.0) {}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  if (!in_band(i, j)) return 0.0;
  return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_ || !in_band(i, j)) {
    throw DomainError("BandedMatrix::at: (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") outside the band");
  }
  return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    double acc = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

void BandedMatrix::scale_and_shift(double alpha, double beta) {
  for (double& v : data_) v *= alpha;
  for (std::size_t i = 0; i < n_; ++i) at(i, i) += beta;
}

BandedLU::BandedLU(const BandedMatrix& a, double pivot_tol)
    : n_(a.size()), kl_(a.lower()), width_(2 * a.lower() + a.upper() + 1), lu_(n_ * width_, 0.0),
      pivot_(n_) {
  const std::size_t ku = a.upper();
  double amax = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku);
    for (std::size_t j = j0; j <= j1; ++j) {
      lu(i, j) = a(i, j);
      amax = std::max(amax, std::abs(a(i, j)));
    }
  }
  const double tol = pivot_tol * (amax > 0.0 ? amax : 1.0);
  const std::size_t ufill = kl_ + ku;

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last = std::min(n_ - 1, k + kl_);
    const std::size_t jend = std::min(n_ - 1, k + ufill);

    std::size_t p = k;
    for (std::size_t i = k + 1; i <= last; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
    }
    pivot_[k] = p;
    if (!(std::abs(lu(p, k)) > tol)) {
      throw SingularMatrix("banded LU: zero pivot in column " + std::to_string(k));
    }
    if (p != k) {
      for (std::size_t j = k; j <= jend; ++j) std::swap(lu(k, j), lu(p, j));
    }
    const double inv = 1.0 / lu(k, k);
    for (std::size_t i = k + 1; i <= last; ++i) {
      const double m = lu(i, k) * inv;
      lu(i, k) = m;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j <= jend; ++j) lu(i, j) -= m * lu(k, j);
    }
  }
}

std::vector<double> BandedLU::solve(std::span<const double> b) const {
  if (b.size() != n_) throw DomainError("banded solve: right-hand side has wrong length");
  std::vector<double> y(b.begin(), b.end());
  const std::size_t ufill = width_ - kl_ - 1;
  for (std::size_t k = 0; k < n_; ++k) {
    if (pivot_[k] != k) std::swap(y[k], y[pivot_[k]]);
    const std::size_t last = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last; ++i) y[i] -= lu(i, k) * y[k];
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    const std::size_t jend = std::min(n_ - 1, ii + ufill);
    double s = y[ii];
    for (std::size_t j = ii + 1; j <= jend; ++j) s -= lu(ii, j) * y[j];
    y[ii] = s / lu(ii, ii);
  }
  return y;
}

std::vector<double> solve_banded(const BandedSystem& system) {
  return BandedLU(system.matrix).solve(system.rhs);
}

}  // namespace thinfilm
