#pragma once

// Banded matrices and a direct LU solver with partial pivoting inside the band.

#include <cstddef>
#include <span>
#include <vector>

namespace thinfilm {

/// Square n x n matrix with `kl` sub- and `ku` super-diagonals, stored row by row.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const { return j + kl_ >= i && j <= i + ku_; }

  /// Entry (i, j); zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;
  /// Mutable entry; (i, j) must lie inside the band.
  double& at(std::size_t i, std::size_t j);

  /// y = A x
  std::vector<double> multiply(std::span<const double> x) const;

  /// A <- alpha A + beta I
  void scale_and_shift(double alpha, double beta);

 private:
  std::size_t n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<double> data_;  // row i holds columns i-kl .. i+ku
};

/// LU factorisation P A = L U. U gets kl + ku super-diagonals from row interchanges.
class BandedLU {
 public:
  /// Throws SingularMatrix when a pivot is below `pivot_tol` * max |a_ij|.
  explicit BandedLU(const BandedMatrix& a, double pivot_tol = 1e-14);

  std::vector<double> solve(std::span<const double> b) const;

 private:
  std::size_t n_, kl_, width_;  // width_: columns i-kl .. i+kl+ku
  std::vector<double> lu_;
  std::vector<std::size_t> pivot_;

  double& lu(std::size_t i, std::size_t j) { return lu_[i * width_ + (j + kl_ - i)]; }
  double lu(std::size_t i, std::size_t j) const { return lu_[i * width_ + (j + kl_ - i)]; }
};

struct BandedSystem {
  BandedMatrix matrix;
  std::vector<double> rhs;
};

std::vector<double> solve_banded(const BandedSystem& system);

}  // namespace thinfilm
