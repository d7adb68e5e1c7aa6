#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "thinfilm/diagnostics.hpp"
#include "thinfilm/timestepper.hpp"

using namespace thinfilm;

namespace {

PhysParams params() {
  PhysParams p;
  p.mu = 1.0;
  p.g1 = 2.0;
  p.g2 = 1.0;
  p.sigma1c = 1.0;
  p.sigma2c = 1.0;
  p.d_surf = 1.0;
  return p;
}

FilmState perturbed(const Grid& grid, double amp) {
  FilmState u = FilmState::flat(grid.size(), 1.0, 1.0, 0.3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.center(i);
    u.f[i] += amp * std::cos(std::numbers::pi * x);
    u.g[i] -= 0.5 * amp * std::cos(2 * std::numbers::pi * x);
    u.gamma[i] += 0.5 * amp * std::cos(3 * std::numbers::pi * x);
  }
  return u;
}

double mean(const std::vector<double>& w) { return std::accumulate(w.begin(), w.end(), 0.0) / w.size(); }

}  // namespace

TEST_CASE("step configuration validation") {
  StepConfig c;
  CHECK_NOTHROW(validate(c));
  c.theta = 0.4;
  CHECK_THROWS_AS(validate(c), DomainError);
  c = StepConfig{};
  c.dt_min = 1.0;
  CHECK_THROWS_AS(validate(c), DomainError);
  c = StepConfig{};
  c.safety = 2.5;
  CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("flat states are preserved bit for bit") {
  for (ModelKind kind : {ModelKind::Gravity, ModelKind::Capillary}) {
    const Model m(params(), SurfactantLaw::linear(1.0), kind);
    const Grid grid(32, 1.0);
    const FilmState u0 = FilmState::flat(32, 0.8, 1.2, 0.4);
    StepConfig cfg;
    const FilmState u1 = integrate(u0, grid, m, cfg, 0.05);
    CHECK(u1.f == u0.f);
    CHECK(u1.g == u0.g);
    CHECK(u1.gamma == u0.gamma);
    CHECK(u1.t == 0.05);
  }
}

TEST_CASE("every accepted step conserves the three means") {
  for (ModelKind kind : {ModelKind::Gravity, ModelKind::Capillary}) {
    const Model m(params(), SurfactantLaw::linear(1.0), kind);
    const Grid grid(64, 1.0);
    StepConfig cfg;
    cfg.dt_init = 1e-5;
    FilmState prev = perturbed(grid, 0.1);
    double worst = 0.0;
    integrate(prev, grid, m, cfg, 0.02, [&](const FilmState& u, const StepInfo&) {
      for (Field f : {Field::F, Field::G, Field::Gamma}) {
        const double a = mean(prev.field(f));
        worst = std::max(worst, std::abs(mean(u.field(f)) - a) / (1.0 + std::abs(a)));
      }
      prev = u;
    });
    CHECK(worst <= 1e-11);
  }
}

TEST_CASE("energy does not increase along a trajectory") {
  for (ModelKind kind : {ModelKind::Gravity, ModelKind::Capillary}) {
    const Model m(params(), SurfactantLaw::linear(1.0), kind);
    const Grid grid(64, 1.0);
    StepConfig cfg;
    cfg.dt_init = 1e-5;
    const FilmState u0 = perturbed(grid, 0.2);
    const double e0 = energy(u0, grid, m);
    double last = e0, worst_rise = 0.0;
    std::size_t steps = 0;
    integrate(u0, grid, m, cfg, 0.2, [&](const FilmState& u, const StepInfo&) {
      const double e = energy(u, grid, m);
      worst_rise = std::max(worst_rise, e - last);
      last = e;
      ++steps;
    });
    INFO(to_string(kind) << " steps " << steps);
    CHECK(worst_rise <= 1e-8 * (1.0 + std::abs(e0)));
    CHECK(last < e0);
  }
}

TEST_CASE("integrate lands on t_end and reports the final state once") {
  const Model m(params(), SurfactantLaw::linear(1.0), ModelKind::Gravity);
  const Grid grid(16, 1.0);
  StepConfig cfg;
  cfg.dt_init = 0.013;
  cfg.dt_max = 0.013;
  int finals = 0, calls = 0;
  std::size_t last_index = 0;
  const FilmState u = integrate(perturbed(grid, 0.05), grid, m, cfg, 0.1, [&](const FilmState&, const StepInfo& info) {
    ++calls;
    finals += info.final ? 1 : 0;
    last_index = info.index;
  });
  CHECK(u.t == 0.1);
  CHECK(finals == 1);
  CHECK(last_index == 8);  // 7 full steps and one clipped step
  CHECK(calls == 9);

  int observed = 0;
  integrate(perturbed(grid, 0.05), grid, m, cfg, 0.1, [&](const FilmState&, const StepInfo&) { ++observed; },
            IntegrateOptions{4});
  CHECK(observed == 3);  // initial, steps 4 and 8 (final)
}

TEST_CASE("zero-length integration returns the initial state") {
  const Model m(params(), SurfactantLaw::linear(1.0), ModelKind::Gravity);
  const Grid grid(16, 1.0);
  const FilmState u0 = perturbed(grid, 0.05);
  int calls = 0;
  const FilmState u = integrate(u0, grid, m, StepConfig{}, 0.0, [&](const FilmState&, const StepInfo& i) {
    ++calls;
    CHECK(i.final);
  });
  CHECK(calls == 1);
  CHECK(u.f == u0.f);
  CHECK_THROWS_AS(integrate(u0, grid, m, StepConfig{}, -1.0), DomainError);
}

TEST_CASE("positivity violations shrink the step, then fail as stiff") {
  PhysParams p = params();
  p.d_surf = 1e-2;
  const Model m(p, SurfactantLaw::linear(1.0), ModelKind::Capillary);
  const Grid grid(32, 1.0);
  FilmState u = FilmState::flat(32, 1.0, 1.0, 0.5);
  for (std::size_t i = 0; i < 32; ++i) {
    const double x = grid.center(i);
    u.f[i] = 0.01 + 0.5 * (1.0 + std::cos(std::numbers::pi * x));
    u.g[i] = 1.0 - 0.9 * std::cos(2 * std::numbers::pi * x);
    u.gamma[i] = 0.5 + 0.45 * std::cos(4 * std::numbers::pi * x);
  }
  StepConfig cfg;
  cfg.dt_init = 0.1;
  cfg.dt_max = 0.1;
  const StepResult r = step(u, grid, m, cfg, 0.1);
  REQUIRE(r.rejections > 0);
  CHECK(r.dt == doctest::Approx(0.1 / std::pow(2.0, r.rejections)));
  for (double v : r.state.pack()) CHECK(v >= cfg.pos_floor);

  cfg.dt_min = 0.1 / std::pow(2.0, r.rejections - 1);
  try {
    (void)step(u, grid, m, cfg, 0.1);
    FAIL("expected StiffFailure");
  } catch (const StiffFailure& e) {
    CHECK(e.state().f == u.f);
    CHECK(e.state().g == u.g);
  }
}

TEST_CASE("solution converges at first order in time for theta = 1") {
  const Model m(params(), SurfactantLaw::linear(1.0), ModelKind::Gravity);
  const Grid grid(32, 1.0);
  const FilmState u0 = perturbed(grid, 0.1);
  auto run = [&](double dt) {
    StepConfig cfg;
    cfg.dt_init = dt;
    cfg.dt_max = dt;
    cfg.safety = 1.0;
    cfg.dt_min = dt / 4;
    return integrate(u0, grid, m, cfg, 0.1);
  };
  const FilmState ref = run(1e-5);
  auto err = [&](const FilmState& u) {
    double e = 0.0;
    for (std::size_t i = 0; i < 32; ++i) e = std::max(e, std::abs(u.f[i] - ref.f[i]));
    return e;
  };
  const double e1 = err(run(4e-3));
  const double e2 = err(run(2e-3));
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
}
