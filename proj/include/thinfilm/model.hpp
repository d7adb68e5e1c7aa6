#pragma once

// Physical constants, surfactant equation of state and the pointwise
// mobility/flux of the two-layer thin-film system with insoluble surfactant.
//
// Both driving regimes share one divergence-form structure
//
//   d/dt (f, g, G) = d/dx [ a(f, g, G) * (dx^k f, dx^k g, dx G) ]
//
// with k = 1 for gravity-driven and k = 3 for capillary-driven flow.

#include <functional>
#include <limits>
#include <string_view>

#include <Eigen/Core>

#include "thinfilm/error.hpp"

namespace thinfilm {

struct PhysParams {
  double mu = 1.0;       // viscosity ratio mu2 / mu1
  double g1 = 0.0;       // modified gravity constant, lower layer
  double g2 = 0.0;       // modified gravity constant, upper layer
  double sigma1c = 0.0;  // constant tension of the liquid-liquid interface
  double sigma2c = 0.0;  // constant part of the free-surface tension
  double d_surf = 1.0;   // surface diffusivity of the surfactant
  double length = 1.0;   // domain length L
};

/// Throws DomainError unless mu, d_surf, length > 0 and sigma*c >= 0.
void validate(const PhysParams& params);

struct GravityConstants {
  double g1;
  double g2;
  double mu;
};

/// G_i = rho_i L G / (mu_i tau0), mu = mu2 / mu1.
GravityConstants derive_gravity_constants(double rho1, double rho2, double mu1, double mu2,
                                          double length, double tau0, double gravity);

/// Surface-tension perturbation sigma(Gamma) and its entropy-like potential Phi,
/// normalised by Phi''(s) s = -sigma'(s).
class SurfactantLaw {
 public:
  using Fn = std::function<double(double)>;

  /// sigma(s) = -beta s, Phi(s) = beta (s ln s - s + 1), Phi(0) = beta.
  static SurfactantLaw linear(double beta);

  /// Custom law. `strictly_decreasing` declares sigma' < 0 on [0, inf).
  SurfactantLaw(Fn sigma, Fn dsigma, Fn phi, Fn dphi, Fn d2phi, bool strictly_decreasing);

  double sigma(double s) const { return sigma_(s); }
  double dsigma(double s) const { return dsigma_(s); }
  double phi(double s) const { return phi_(s); }
  double dphi(double s) const { return dphi_(s); }
  double d2phi(double s) const { return d2phi_(s); }
  bool strictly_decreasing() const { return strictly_decreasing_; }

  /// Slope of the built-in linear law; NaN for custom laws.
  double beta() const { return beta_; }

 private:
  Fn sigma_, dsigma_, phi_, dphi_, d2phi_;
  bool strictly_decreasing_ = false;
  double beta_ = std::numeric_limits<double>::quiet_NaN();
};

enum class ModelKind { Gravity, Capillary };

/// Derivative order acting on the film heights: 1 (gravity) or 3 (capillary).
constexpr int derivative_order(ModelKind kind) { return kind == ModelKind::Gravity ? 1 : 3; }

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct Coefficients {
  double r;  // R_k
  double s;  // S_k
};

/// (G1 - G2 mu, G2) for gravity, (-sigma1c, -sigma2c) for capillary.
/// Throws AssumptionViolation when G1 (R1 > 0, G2 > 0) or S2 (sigma_ic > 0) fails.
Coefficients coefficients(const PhysParams& params, ModelKind kind);

/// Validated bundle of everything the pointwise formulas need.
class Model {
 public:
  Model(PhysParams params, SurfactantLaw law, ModelKind kind);

  const PhysParams& params() const { return params_; }
  const SurfactantLaw& law() const { return law_; }
  ModelKind kind() const { return kind_; }
  int order() const { return derivative_order(kind_); }
  double r() const { return coeff_.r; }
  double s() const { return coeff_.s; }

 private:
  PhysParams params_;
  SurfactantLaw law_;
  ModelKind kind_;
  Coefficients coeff_;
};

struct PointState {
  double f;
  double g;
  double gamma;
};

/// (dx^k f, dx^k g, dx Gamma) at one point.
struct PointGradients {
  double dkf;
  double dkg;
  double dgamma;
};

using Mobility = Eigen::Matrix3d;
using Flux = Eigen::Vector3d;

/// The 3x3 mobility a(u). Rows are the f, g and Gamma fluxes; columns multiply
/// dx^k f, dx^k g and dx Gamma. Throws DomainError for negative components.
Mobility mobility(const PointState& u, const Model& model);

/// Same as mobility() with sigma'(Gamma) supplied by the caller.
Mobility mobility(const PointState& u, double mu, double r, double s, double d_surf,
                  double dsigma);

/// mobility(u) * grads; the Gamma component contains the +D dx Gamma term.
Flux pointwise_flux(const PointState& u, const PointGradients& grads, const Model& model);

}  // namespace thinfilm
