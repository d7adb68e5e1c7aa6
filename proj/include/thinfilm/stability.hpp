#pragma once

// Equilibrium analysis for flat states: positive-definiteness certificate of the
// symmetrised linearisation (gravity), its Gamma* threshold, the spectral
// abscissa of the discrete linearisation, and the Lopatinskii-Shapiro root check
// for the capillary principal symbol.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "thinfilm/discretization.hpp"
#include "thinfilm/model.hpp"

namespace thinfilm {

struct Equilibrium {
  double f_star = 1.0;
  double g_star = 1.0;
  double gamma_star = 0.0;
};

/// Throws DomainError unless f_star, g_star > 0 and gamma_star >= 0.
void validate(const Equilibrium& eq);

/// Scalar inputs of the symmetric matrix b^z, generic so it can be evaluated
/// in exact arithmetic.
template <class T>
struct BInputs {
  T f, g, gamma;
  T mu, r, s, d_surf;
  T dsigma;  // sigma'(gamma)
};

template <class T>
using Sym3 = std::array<std::array<T, 3>, 3>;

template <class T>
Sym3<T> b_matrix_entries(const BInputs<T>& in, const T& z) {
  const T& f = in.f;
  const T& g = in.g;
  const T& mu = in.mu;
  const T& r = in.r;
  const T& s = in.s;
  const T two(2), three(3);
  const T smu = s * mu;
  const T ratio = smu / r;

  const T d1 = ratio * (s * g * g * g / three + smu * (f * f * f / three + f * f * g + f * g * g));
  const T b12 = smu * (f * f * f / three + f * f * g / two);
  const T b22 = r * f * f * f / three;
  const T j = -(ratio * (mu * f * f / two + mu * f * g + g * g / two) * in.dsigma -
                z * (s * g * g / two + smu * (f * f / two + f * g)) * in.gamma) /
              two;
  const T b23 = -(mu * f * f / two * in.dsigma - z * r * f * f / two * in.gamma) / two;
  const T d3 = -z * (mu * f + g) * in.gamma * in.dsigma + z * in.d_surf;

  return {{{d1, b12, j}, {b12, b22, b23}, {j, b23, d3}}};
}

/// Leading principal minors (1x1, 2x2, 3x3) of a symmetric 3x3 matrix.
template <class T>
std::array<T, 3> leading_minors(const Sym3<T>& b) {
  const T m1 = b[0][0];
  const T m2 = b[0][0] * b[1][1] - b[0][1] * b[1][0];
  const T m3 = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
               b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  return {m1, m2, m3};
}

/// b^z at the equilibrium for the gravity model. Throws AssumptionViolation when
/// R1 <= 0 or G2 <= 0, DomainError for z <= 0.
Eigen::Matrix3d build_b_matrix(const Equilibrium& eq, const PhysParams& params, const SurfactantLaw& law, double z);

struct Certificate {
  std::optional<double> z;  // first certifying z on the scan grid
  Eigen::Matrix3d b;        // b^z at the certifying z (or at the last z tried)
  Eigen::Vector3d minors;
};

inline constexpr std::size_t kZGridPoints = 60;
inline constexpr double kZGridMin = 1e-3;
inline constexpr double kZGridMax = 1e9;

/// The fixed logarithmic z grid on [1e-3, 1e9].
std::vector<double> z_grid();

/// Scans z_grid() for a z with all leading minors of b^z positive.
Certificate certify_positive_definite(const Equilibrium& eq, const PhysParams& params, const SurfactantLaw& law);

inline constexpr int kThresholdBisections = 40;
inline constexpr double kThresholdUpper = 1e3;

/// Largest certified Gamma* in [0, gamma_hi] by bisection. Throws
/// AssumptionViolation when Gamma* = 0 has no certificate.
double gamma_threshold(double f_star, double g_star, const PhysParams& params, const SurfactantLaw& law,
                       double gamma_hi = kThresholdUpper);

/// Dense copy of the discrete linearisation M at the flat state (du/dt = -M u).
Eigen::MatrixXd dense_linearization(const Equilibrium& eq, const Grid& grid, const Model& model);

/// max Re of the spectrum of -M on the mean-zero subspace of each field.
double spectral_abscissa(const Equilibrium& eq, const Grid& grid, const Model& model);

double spectral_abscissa(const Equilibrium& eq, const Grid& grid, const PhysParams& params, const SurfactantLaw& law,
                         ModelKind kind);

/// Slowest decay rate -Re(lambda) among the eigenmodes of the mean-zero
/// linearisation that carry a share above `rel_tol` of the packed perturbation
/// u0 - u*. Equals -spectral_abscissa when every mode is excited.
double excited_decay_rate(const Equilibrium& eq, const Grid& grid, const Model& model,
                          std::span<const double> perturbation, double rel_tol = 1e-8);

struct EquilibriumReport {
  Equilibrium eq;
  std::optional<double> z_admissible;
  Eigen::Matrix3d b_matrix;
  Eigen::Vector3d minors;
  double gamma_threshold = 0.0;
  double spectral_abscissa = 0.0;
  double omega0 = 0.0;
};

EquilibriumReport analyze_equilibrium(const Equilibrium& eq, const Grid& grid, const Model& model);

using Complex = std::complex<double>;

struct LSOptions {
  bool sample_lambda = false;  // also check 16 lambda on |lambda| = 1, Re lambda >= 0
  double det_tol = 1e-8;       // threshold on the scaled determinant
};

struct LSReport {
  Eigen::Matrix2d a_tilde;  // principal symbol block
  Eigen::Matrix2d a_inv;    // (-a_tilde)^{-1}
  Complex e_plus, e_minus;
  std::array<Complex, 8> roots;  // (q, -q, -iq, iq) for E+, then for E-
  int n_decaying = 0;
  double det_mag = 0.0;     // |det| of the odd-power matrix over the growing roots
  double det_scaled = 0.0;  // det_mag / (prod |L| prod_{i<j} (|L_i|^2 + |L_j|^2))
  bool complex_e = false;
  bool distinct = false;
  std::size_t lambda_samples = 1;
  double worst_det_scaled = 0.0;  // minimum over all sampled lambda
  bool pass = false;
};

/// Principal 2x2 height block of the capillary mobility at (f*, g*).
Eigen::Matrix2d capillary_symbol(double f_star, double g_star, const PhysParams& params);

/// Throws DomainError for non-positive heights, AssumptionViolation when
/// sigma1c or sigma2c <= 0, DegenerateSymbol when -a_tilde is singular.
LSReport ls_check(double f_star, double g_star, const PhysParams& params, const LSOptions& opts = {});

/// Same check for a supplied -a_tilde.
LSReport ls_check_symbol(const Eigen::Matrix2d& neg_a_tilde, const LSOptions& opts = {});

}  // namespace thinfilm
