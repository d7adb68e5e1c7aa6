#pragma once

// Conserved and dissipated quantities, decay-rate fits and the lubrication
// velocity/pressure profiles.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "thinfilm/discretization.hpp"
#include "thinfilm/model.hpp"

namespace thinfilm {

/// h * sum(w): midpoint quadrature of the integral over (0, L).
double mass(std::span<const double> w, const Grid& grid);

/// Energy functional. k = 1: cell quadrature of 1/2 (R f^2 + S mu (f+g)^2) + mu Phi(G).
/// k = 3: the gradient part -1/2 (R |f_x|^2 + S mu |(f+g)_x|^2) is summed over the
/// interior faces with the solver's face differences, so that the discrete energy
/// telescopes against the discrete fluxes; mu Phi(G) is summed over cells.
double energy(const FilmState& state, const Grid& grid, const Model& model);

/// Face quadrature of the sum-of-squares dissipation density
///   f [ f dx^k((R+S mu) f + S mu g)/sqrt3 + sqrt3/2 mu (S g dx^k(f+g) - sigma_x) ]^2
///   + mu^2 f/4 [S g dx^k(f+g) - sigma_x]^2 + g mu [S g dx^k(f+g)/sqrt3 - sqrt3/2 sigma_x]^2
///   + g mu/4 sigma_x^2 + mu Phi''(G) D |G_x|^2
/// using face-averaged states and the solver's face derivatives.
double dissipation(const FilmState& state, const Grid& grid, const Model& model);

/// Pointwise dissipation density with explicit derivatives (sigma_x = sigma'(G) dgamma).
double dissipation_density(const PointState& u, const PointGradients& d, const Model& model);

struct SeriesRecord {
  double t = 0.0;
  double mass_f = 0.0, mass_g = 0.0, mass_gamma = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double dev_f = 0.0, dev_g = 0.0, dev_gamma = 0.0;  // sup |w - w_ref|
};

/// Diagnostics of one snapshot against the flat reference (usually the initial means).
SeriesRecord make_record(const FilmState& state, const Grid& grid, const Model& model, const PointState& reference);

struct DecayFit {
  double omega = 0.0;      // negated slope of log(deviation)
  double amplitude = 0.0;  // M in y ~ M exp(-omega t)
  double residual = 0.0;   // RMS of the log-space residuals
  double t_begin = 0.0, t_end = 0.0;
  std::size_t samples = 0;
};

inline constexpr double kDefaultTransientFraction = 0.2;

/// Least-squares line through (t, log y) after dropping the first
/// `discard_fraction` of the samples. Needs at least 10 samples and y > 0 in the
/// window; throws FitWindowError otherwise.
DecayFit fit_decay(std::span<const double> t, std::span<const double> y,
                   double discard_fraction = kDefaultTransientFraction);

DecayFit fit_decay(std::span<const SeriesRecord> series, Field field,
                   double discard_fraction = kDefaultTransientFraction);

/// Vertical structure of one lubrication column. Both gravity (G1, G2) and
/// capillary (sigma1c, sigma2c) terms are kept; zero either pair to specialise.
struct ColumnKinematics {
  double f, g;
  double fx, gx;      // first derivatives
  double fxx, gxx;    // second derivatives
  double fxxx, gxxx;  // third derivatives
  double sigma_x;     // dx sigma(Gamma)
  PhysParams params;

  /// Lower-layer horizontal pressure gradient, -dz^2 u1.
  double lower_forcing() const;
  /// G2 (f+g)_x - sigma2c (f+g)_xxx
  double upper_forcing() const;

  double u1(double z) const;  // 0 <= z <= f
  double u2(double z) const;  // f <= z <= f+g
  double p1(double z) const;
  double p2(double z) const;
  /// Closed form of the integral of u1 over (0, f).
  double lower_volume_flux() const;
};

struct VelocityField {
  std::vector<double> x;  // cell centres
  std::vector<double> z;  // sample heights
  Eigen::MatrixXd u;      // u1 for z <= f, u2 above (rows: x, cols: z)
  Eigen::MatrixXd p;      // p1 for z <= f, p2 above
};

/// Column kinematics at cell i; derivatives by centred differences on the
/// ghost-extended fields.
ColumnKinematics column_at(const FilmState& state, const Grid& grid, const Model& model, std::size_t i);

/// Throws DomainError when a sample height lies outside [0, f + g] in some column.
VelocityField reconstruct_velocity(const FilmState& state, const Grid& grid, const Model& model,
                                   std::span<const double> z_samples);

}  // namespace thinfilm
