#include "thinfilm/model.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace thinfilm {

void validate(const PhysParams& p) {
  if (!(p.mu > 0.0)) throw DomainError("viscosity ratio mu must be positive");
  if (!(p.d_surf > 0.0)) throw DomainError("surface diffusivity d_surf must be positive");
  if (!(p.length > 0.0)) throw DomainError("domain length must be positive");
  if (p.sigma1c < 0.0 || p.sigma2c < 0.0) throw DomainError("surface tension coefficients must be >= 0");
}

GravityConstants derive_gravity_constants(double rho1, double rho2, double mu1, double mu2,
                                          double length, double tau0, double gravity) {
  for (double v : {rho1, rho2, mu1, mu2, length, tau0, gravity}) {
    if (!(v > 0.0)) throw DomainError("derive_gravity_constants: all inputs must be positive");
  }
  return {rho1 * length * gravity / (mu1 * tau0), rho2 * length * gravity / (mu2 * tau0), mu2 / mu1};
}

SurfactantLaw SurfactantLaw::linear(double beta) {
  if (!(beta >= 0.0)) throw AssumptionViolation("S1: surfactant law slope beta must be >= 0");
  SurfactantLaw law(
      [beta](double s) { return -beta * s; },
      [beta](double) { return -beta; },
      [beta](double s) { return s > 0.0 ? beta * (s * std::log(s) - s + 1.0) : beta; },
      [beta](double s) { return beta == 0.0 ? 0.0 : beta * std::log(s); },
      [beta](double s) { return beta == 0.0 ? 0.0 : beta / s; },
      beta > 0.0);
  law.beta_ = beta;
  return law;
}

SurfactantLaw::SurfactantLaw(Fn sigma, Fn dsigma, Fn phi, Fn dphi, Fn d2phi, bool strictly_decreasing)
    : sigma_(std::move(sigma)),
      dsigma_(std::move(dsigma)),
      phi_(std::move(phi)),
      dphi_(std::move(dphi)),
      d2phi_(std::move(d2phi)),
      strictly_decreasing_(strictly_decreasing) {}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::Gravity ? "gravity" : "capillary";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "gravity") return ModelKind::Gravity;
  if (name == "capillary") return ModelKind::Capillary;
  throw DomainError("unknown model kind '" + std::string(name) + "' (expected gravity|capillary)");
}

Coefficients coefficients(const PhysParams& p, ModelKind kind) {
  if (kind == ModelKind::Gravity) {
    const double r1 = p.g1 - p.g2 * p.mu;
    if (!(r1 > 0.0)) throw AssumptionViolation("G1: R1 <= 0 (R1 = G1 - G2 mu = " + std::to_string(r1) + ")");
    if (!(p.g2 > 0.0)) throw AssumptionViolation("G1: S1 = G2 must be positive");
    return {r1, p.g2};
  }
  if (!(p.sigma1c > 0.0) || !(p.sigma2c > 0.0)) {
    throw AssumptionViolation("S2: sigma1c and sigma2c must be positive");
  }
  return {-p.sigma1c, -p.sigma2c};
}

Model::Model(PhysParams params, SurfactantLaw law, ModelKind kind)
    : params_(params), law_(std::move(law)), kind_(kind), coeff_{} {
  validate(params_);
  coeff_ = coefficients(params_, kind_);
}

Mobility mobility(const PointState& u, double mu, double r, double s, double d_surf, double dsigma) {
  if (u.f < 0.0 || u.g < 0.0 || u.gamma < 0.0) {
    throw DomainError("mobility: film heights and surfactant concentration must be non-negative");
  }
  const double f = u.f;
  const double g = u.g;
  const double G = u.gamma;
  const double f2 = f * f;
  const double f3 = f2 * f;
  const double g2 = g * g;
  const double g3 = g2 * g;
  const double rs = r + s * mu;

  Mobility a;
  a(0, 0) = rs * f3 / 3.0 + s * mu * f2 * g / 2.0;
  a(0, 1) = s * mu * (f3 / 3.0 + f2 * g / 2.0);
  a(0, 2) = -mu * f2 / 2.0 * dsigma;

  a(1, 0) = s * g3 / 3.0 + rs * f2 * g / 2.0 + s * mu * f * g2;
  a(1, 1) = s * g3 / 3.0 + s * mu * (f2 * g / 2.0 + f * g2);
  a(1, 2) = -(mu * f * g + g2 / 2.0) * dsigma;

  a(2, 0) = (s * g2 / 2.0 + rs * f2 / 2.0 + s * mu * f * g) * G;
  a(2, 1) = (s * g2 / 2.0 + s * mu * (f2 / 2.0 + f * g)) * G;
  a(2, 2) = -(mu * f + g) * G * dsigma + d_surf;
  return a;
}

Mobility mobility(const PointState& u, const Model& model) {
  const auto& p = model.params();
  return mobility(u, p.mu, model.r(), model.s(), p.d_surf, model.law().dsigma(u.gamma));
}

Flux pointwise_flux(const PointState& u, const PointGradients& grads, const Model& model) {
  return mobility(u, model) * Eigen::Vector3d(grads.dkf, grads.dkg, grads.dgamma);
}

}  // namespace thinfilm
