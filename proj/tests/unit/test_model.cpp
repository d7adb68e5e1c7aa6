#include <doctest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"
#include "thinfilm/model.hpp"

using namespace thinfilm;

namespace {

PhysParams unit_gravity() {
  PhysParams p;
  p.mu = 1.0;
  p.g1 = 2.0;  // R1 = G1 - G2 mu = 1
  p.g2 = 1.0;  // S1 = 1
  p.d_surf = 1.0;
  return p;
}

PhysParams random_params() {
  PhysParams p;
  p.mu = oracle::uniform(0.1, 5.0);
  p.g2 = oracle::uniform(0.1, 5.0);
  p.g1 = p.g2 * p.mu + oracle::uniform(0.1, 5.0);
  p.sigma1c = oracle::uniform(0.1, 5.0);
  p.sigma2c = oracle::uniform(0.1, 5.0);
  p.d_surf = oracle::uniform(0.1, 5.0);
  return p;
}

}  // namespace

TEST_CASE("coefficients follow the driving mechanism") {
  PhysParams p = unit_gravity();
  p.g1 = 3.5;
  p.g2 = 1.25;
  p.mu = 2.0;
  p.sigma1c = 0.7;
  p.sigma2c = 0.3;
  const Coefficients grav = coefficients(p, ModelKind::Gravity);
  CHECK(grav.r == doctest::Approx(3.5 - 1.25 * 2.0));
  CHECK(grav.s == 1.25);
  const Coefficients cap = coefficients(p, ModelKind::Capillary);
  CHECK(cap.r == -0.7);
  CHECK(cap.s == -0.3);
}

TEST_CASE("assumption violations are named") {
  PhysParams p = unit_gravity();
  p.g1 = 0.5;  // R1 = -0.5
  try {
    (void)coefficients(p, ModelKind::Gravity);
    FAIL("expected AssumptionViolation");
  } catch (const AssumptionViolation& e) {
    CHECK(std::string(e.what()).find("G1") != std::string::npos);
  }
  PhysParams c = unit_gravity();
  c.sigma1c = 0.0;
  c.sigma2c = 1.0;
  try {
    (void)coefficients(c, ModelKind::Capillary);
    FAIL("expected AssumptionViolation");
  } catch (const AssumptionViolation& e) {
    CHECK(std::string(e.what()).find("S2") != std::string::npos);
  }
  PhysParams bad = unit_gravity();
  bad.mu = 0.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = unit_gravity();
  bad.length = -1.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
}

TEST_CASE("gravity constants G_i = rho_i L G / (mu_i tau0)") {
  const GravityConstants gc = derive_gravity_constants(1000.0, 800.0, 2.0, 3.0, 0.5, 4.0, 9.81);
  CHECK(gc.g1 == doctest::Approx(1000.0 * 0.5 * 9.81 / (2.0 * 4.0)));
  CHECK(gc.g2 == doctest::Approx(800.0 * 0.5 * 9.81 / (3.0 * 4.0)));
  CHECK(gc.mu == doctest::Approx(1.5));
}

TEST_CASE("linear surfactant law") {
  const SurfactantLaw law = SurfactantLaw::linear(2.5);
  CHECK(law.beta() == 2.5);
  CHECK(law.phi(0.0) == doctest::Approx(2.5));
  CHECK(law.phi(1.0) == doctest::Approx(0.0));
  for (double s : {0.01, 0.3, 1.0, 7.0}) {
    CHECK(law.sigma(s) == doctest::Approx(-2.5 * s));
    CHECK(law.dsigma(s) == -2.5);
    CHECK(law.d2phi(s) * s == doctest::Approx(-law.dsigma(s)));
    // Phi' by central differences
    const double h = 1e-6 * s;
    CHECK(law.dphi(s) == doctest::Approx((law.phi(s + h) - law.phi(s - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(law.strictly_decreasing());
  CHECK_FALSE(SurfactantLaw::linear(0.0).strictly_decreasing());
  CHECK(SurfactantLaw::linear(0.0).d2phi(0.0) == 0.0);
  CHECK_THROWS_AS(SurfactantLaw::linear(-1.0), AssumptionViolation);
}

TEST_CASE("mobility at f = g = 1, Gamma = 0 with unit constants") {
  // Hand substitution into the mobility matrix display: rows 1 and 2.
  const Mobility a = mobility({1.0, 1.0, 0.0}, 1.0, 1.0, 1.0, 1.0, -1.0);
  CHECK(a(0, 0) == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(a(0, 1) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(a(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a(1, 0) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(a(1, 1) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  CHECK(a(1, 2) == doctest::Approx(1.5).epsilon(1e-15));
  // Gamma row vanishes apart from the diffusion.
  CHECK(a(2, 0) == 0.0);
  CHECK(a(2, 1) == 0.0);
  CHECK(a(2, 2) == 1.0);
}

TEST_CASE("pointwise flux matches the expanded evolution equations") {
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::Gravity, ModelKind::Capillary}) {
    for (int trial = 0; trial < 500; ++trial) {
      const PhysParams p = random_params();
      const double beta = oracle::uniform(0.0, 3.0);
      const Model m(p, SurfactantLaw::linear(beta), kind);
      const PointState u{oracle::uniform(0.0, 2.0), oracle::uniform(0.0, 2.0), oracle::uniform(0.0, 2.0)};
      const PointGradients d{oracle::uniform(-2, 2), oracle::uniform(-2, 2), oracle::uniform(-2, 2)};
      const Flux got = pointwise_flux(u, d, m);
      const auto want = oracle::flux(u.f, u.g, u.gamma, d.dkf, d.dkg, d.dgamma, p.mu, m.r(), m.s(), p.d_surf, -beta);
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(got(c) - want[static_cast<std::size_t>(c)]));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("f-flux vanishes identically where f = 0") {
  const Model m(unit_gravity(), SurfactantLaw::linear(1.0), ModelKind::Gravity);
  const Flux fl = pointwise_flux({0.0, 1.3, 0.4}, {0.7, -2.0, 3.0}, m);
  CHECK(fl(0) == 0.0);
}

TEST_CASE("mobility rejects negative states") {
  const Model m(unit_gravity(), SurfactantLaw::linear(1.0), ModelKind::Gravity);
  CHECK_THROWS_AS(mobility({-1e-3, 1.0, 0.0}, m), DomainError);
  CHECK_THROWS_AS(mobility({1.0, -1.0, 0.0}, m), DomainError);
  CHECK_THROWS_AS(mobility({1.0, 1.0, -0.5}, m), DomainError);
}

TEST_CASE("model kind names round trip") {
  CHECK(model_kind_from_string(to_string(ModelKind::Gravity)) == ModelKind::Gravity);
  CHECK(model_kind_from_string(to_string(ModelKind::Capillary)) == ModelKind::Capillary);
  CHECK_THROWS_AS(model_kind_from_string("viscous"), DomainError);
  CHECK(derivative_order(ModelKind::Gravity) == 1);
  CHECK(derivative_order(ModelKind::Capillary) == 3);
}
