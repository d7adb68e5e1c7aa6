#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "thinfilm/diagnostics.hpp"

using namespace thinfilm;

namespace {

PhysParams random_params() {
  PhysParams p;
  p.mu = oracle::uniform(0.2, 3.0);
  p.g2 = oracle::uniform(0.2, 3.0);
  p.g1 = p.g2 * p.mu + oracle::uniform(0.2, 3.0);
  p.sigma1c = oracle::uniform(0.2, 3.0);
  p.sigma2c = oracle::uniform(0.2, 3.0);
  p.d_surf = oracle::uniform(0.2, 3.0);
  return p;
}

}  // namespace

TEST_CASE("mass is the midpoint quadrature") {
  const Grid grid(10, 2.0);
  std::vector<double> w(10, 0.0);
  for (std::size_t i = 0; i < 10; ++i) w[i] = grid.center(i);
  CHECK(mass(w, grid) == doctest::Approx(2.0));  // integral of x over (0, 2)
}

TEST_CASE("energy of flat states") {
  PhysParams p;
  p.mu = 1.5;
  p.g1 = 4.0;
  p.g2 = 2.0;
  p.sigma1c = 1.0;
  p.sigma2c = 1.0;
  p.length = 3.0;
  const double beta = 0.8, f = 0.7, g = 1.1, gam = 0.4;
  const double phi = beta * (gam * std::log(gam) - gam + 1.0);
  const Grid grid(24, 3.0);
  const FilmState u = FilmState::flat(24, f, g, gam);
  const Model grav(p, SurfactantLaw::linear(beta), ModelKind::Gravity);
  const double r = 4.0 - 2.0 * 1.5, s = 2.0;
  CHECK(energy(u, grid, grav) ==
        doctest::Approx(3.0 * (0.5 * (r * f * f + s * 1.5 * (f + g) * (f + g)) + 1.5 * phi)).epsilon(1e-13));
  const Model cap(p, SurfactantLaw::linear(beta), ModelKind::Capillary);
  CHECK(energy(u, grid, cap) == doctest::Approx(3.0 * 1.5 * phi).epsilon(1e-13));
  CHECK(dissipation(u, grid, grav) == 0.0);
  CHECK(dissipation(u, grid, cap) == 0.0);
}

TEST_CASE("capillary energy of a cosine profile") {
  // -1/2 R int |f_x|^2 with f = 1 + a cos(pi x): int_0^1 (a pi sin)^2 = a^2 pi^2 / 2
  PhysParams p;
  p.sigma1c = 2.0;
  p.sigma2c = 1.0;
  const Grid grid(400, 1.0);
  FilmState u = FilmState::flat(400, 1.0, 1.0, 1.0);
  const double a = 0.1;
  for (std::size_t i = 0; i < 400; ++i) {
    u.f[i] += a * std::cos(std::numbers::pi * grid.center(i));
    u.g[i] -= a * std::cos(std::numbers::pi * grid.center(i));  // f + g flat
  }
  const Model cap(p, SurfactantLaw::linear(0.0), ModelKind::Capillary);
  CHECK(energy(u, grid, cap) == doctest::Approx(0.5 * 2.0 * a * a * std::pow(std::numbers::pi, 2) / 2).epsilon(1e-4));
}

TEST_CASE("dissipation density equals the energy-gradient pairing with the flux") {
  // For both orders: D = B v . F with v = (dx^k f, dx^k g, dx G) and
  // B v = (R v1 + S mu (v1 + v2), S mu (v1 + v2), mu Phi''(G) v3).
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::Gravity, ModelKind::Capillary}) {
    for (int trial = 0; trial < 400; ++trial) {
      const PhysParams p = random_params();
      const double beta = oracle::uniform(0.1, 3.0);
      const Model m(p, SurfactantLaw::linear(beta), kind);
      const PointState u{oracle::uniform(0.05, 2.0), oracle::uniform(0.05, 2.0), oracle::uniform(0.05, 2.0)};
      const PointGradients d{oracle::uniform(-2, 2), oracle::uniform(-2, 2), oracle::uniform(-2, 2)};
      const auto fl = oracle::flux(u.f, u.g, u.gamma, d.dkf, d.dkg, d.dgamma, p.mu, m.r(), m.s(), p.d_surf, -beta);
      const double smu = m.s() * p.mu;
      const double pairing = (m.r() * d.dkf + smu * (d.dkf + d.dkg)) * fl[0] + smu * (d.dkf + d.dkg) * fl[1] +
                             p.mu * beta / u.gamma * d.dgamma * fl[2];
      const double got = dissipation_density(u, d, m);
      worst = std::max(worst, std::abs(got - pairing) / (1.0 + std::abs(pairing)));
      CHECK(got >= 0.0);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("decay fit recovers an exact exponential") {
  std::vector<double> t, y;
  for (int i = 0; i < 50; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(-1.7 * t.back()));
  }
  const DecayFit fit = fit_decay(t, y);
  CHECK(fit.omega == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.samples == 40);
  CHECK(fit.t_begin == doctest::Approx(1.0));

  // Transient garbage inside the discarded window does not matter.
  y[0] = 1e3;
  y[5] = 1e-30;
  CHECK(fit_decay(t, y).omega == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("decay fit rejects unusable windows") {
  std::vector<double> t(9), y(9, 1.0);
  for (int i = 0; i < 9; ++i) t[static_cast<std::size_t>(i)] = i;
  CHECK_THROWS_AS(fit_decay(t, y), FitWindowError);
  t.push_back(9);
  y.push_back(1.0);
  CHECK_NOTHROW(fit_decay(t, y));
  y[7] = 0.0;
  CHECK_THROWS_AS(fit_decay(t, y), FitWindowError);

  std::vector<SeriesRecord> series(20);
  for (std::size_t i = 0; i < 20; ++i) {
    series[i].t = static_cast<double>(i);
    series[i].dev_gamma = std::exp(-0.5 * series[i].t);
  }
  CHECK(fit_decay(series, Field::Gamma).omega == doctest::Approx(0.5));
  CHECK_THROWS_AS(fit_decay(series, Field::F), FitWindowError);
}

TEST_CASE("series record against the reference state") {
  PhysParams p;
  p.g1 = 2.0;
  p.g2 = 1.0;
  const Model m(p, SurfactantLaw::linear(1.0), ModelKind::Gravity);
  const Grid grid(8, 1.0);
  FilmState u = FilmState::flat(8, 1.0, 1.0, 0.5, 0.25);
  u.f[3] = 1.2;
  u.gamma[0] = 0.4;
  const SeriesRecord r = make_record(u, grid, m, {1.0, 1.0, 0.5});
  CHECK(r.t == 0.25);
  CHECK(r.dev_f == doctest::Approx(0.2));
  CHECK(r.dev_g == 0.0);
  CHECK(r.dev_gamma == doctest::Approx(0.1));
  CHECK(r.mass_f == doctest::Approx(1.0 + 0.2 / 8));
}

TEST_CASE("column kinematics satisfy the interface and wall conditions") {
  for (int trial = 0; trial < 50; ++trial) {
    ColumnKinematics c{};
    c.params = random_params();
    c.f = oracle::uniform(0.1, 2.0);
    c.g = oracle::uniform(0.1, 2.0);
    c.fx = oracle::uniform(-1, 1);
    c.gx = oracle::uniform(-1, 1);
    c.fxx = oracle::uniform(-1, 1);
    c.gxx = oracle::uniform(-1, 1);
    c.fxxx = oracle::uniform(-1, 1);
    c.gxxx = oracle::uniform(-1, 1);
    c.sigma_x = oracle::uniform(-1, 1);
    const double mu = c.params.mu;
    const double e = 1e-6;
    auto dz = [e](auto fn, double z) { return (fn(z + e) - fn(z - e)) / (2 * e); };
    auto u1 = [&](double z) { return c.u1(z); };
    auto u2 = [&](double z) { return c.u2(z); };
    CHECK(c.u1(0.0) == 0.0);                                              // no slip
    CHECK(c.u1(c.f) == doctest::Approx(c.u2(c.f)).epsilon(1e-12));         // continuity
    CHECK(dz(u1, c.f) == doctest::Approx(mu * dz(u2, c.f)).epsilon(1e-6));  // stress balance
    CHECK(dz(u2, c.f + c.g) == doctest::Approx(c.sigma_x).epsilon(1e-6));   // Marangoni stress
    CHECK(c.p1(c.f) == doctest::Approx(mu * c.p2(c.f) - c.params.sigma1c * c.fxx).epsilon(1e-12));
    CHECK(c.p2(c.f + c.g) == doctest::Approx(-c.params.sigma2c * (c.fxx + c.gxx)).epsilon(1e-12));
    const double integral = oracle::simpson(u1, 0.0, c.f, 8);
    CHECK(c.lower_volume_flux() == doctest::Approx(integral).epsilon(1e-12));
  }
}

TEST_CASE("lower-layer volume flux equals minus the f-flux") {
  for (ModelKind kind : {ModelKind::Gravity, ModelKind::Capillary}) {
    for (int trial = 0; trial < 100; ++trial) {
      PhysParams p = random_params();
      if (kind == ModelKind::Gravity) {
        p.sigma1c = p.sigma2c = 0.0;
      } else {
        p.g1 = p.g2 = 0.0;
      }
      const double beta = oracle::uniform(0.0, 2.0);
      const Model m(p, SurfactantLaw::linear(beta), kind);
      ColumnKinematics c{};
      c.params = p;
      c.f = oracle::uniform(0.1, 2.0);
      c.g = oracle::uniform(0.1, 2.0);
      c.fx = oracle::uniform(-1, 1);
      c.gx = oracle::uniform(-1, 1);
      c.fxxx = oracle::uniform(-1, 1);
      c.gxxx = oracle::uniform(-1, 1);
      c.fxx = c.gxx = 0.0;
      const double gamma = oracle::uniform(0.1, 1.0), gx = oracle::uniform(-1, 1);
      c.sigma_x = -beta * gx;
      const bool grav = kind == ModelKind::Gravity;
      const auto fl = oracle::flux(c.f, c.g, gamma, grav ? c.fx : c.fxxx, grav ? c.gx : c.gxxx, gx, p.mu, m.r(),
                                   m.s(), p.d_surf, -beta);
      const double integral = oracle::simpson([&](double z) { return c.u1(z); }, 0.0, c.f, 8);
      CHECK(integral == doctest::Approx(-fl[0]).epsilon(1e-8));
    }
  }
}

TEST_CASE("flat-state pressure is hydrostatic") {
  PhysParams p;
  p.mu = 2.0;
  p.g1 = 5.0;
  p.g2 = 1.5;
  const Model m(p, SurfactantLaw::linear(1.0), ModelKind::Gravity);
  const Grid grid(16, 1.0);
  const FilmState u = FilmState::flat(16, 0.8, 0.6, 0.2);
  const std::vector<double> z{0.0, 0.4, 0.8, 1.1, 1.4};
  const VelocityField v = reconstruct_velocity(u, grid, m, z);
  for (Eigen::Index i = 0; i < 16; ++i) {
    for (Eigen::Index k = 0; k < 5; ++k) CHECK(v.u(i, k) == 0.0);
    // lower layer: G1 (f - z) plus the weight of the upper layer mu G2 g
    CHECK(v.p(i, 1) == doctest::Approx(5.0 * 0.4 + 2.0 * 1.5 * 0.6));
    CHECK(v.p(i, 3) == doctest::Approx(1.5 * (1.4 - 1.1)));
    CHECK(v.p(i, 4) == doctest::Approx(0.0));
  }
  const std::vector<double> bad{1.5};
  CHECK_THROWS_AS(reconstruct_velocity(u, grid, m, bad), DomainError);
}
