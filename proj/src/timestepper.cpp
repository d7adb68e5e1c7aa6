#include "thinfilm/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thinfilm/banded.hpp"

namespace thinfilm {

void validate(const StepConfig& cfg) {
  if (!(cfg.dt_min > 0.0) || !(cfg.dt_min <= cfg.dt_init) || !(cfg.dt_init <= cfg.dt_max)) {
    throw DomainError("step config: need 0 < dt_min <= dt_init <= dt_max");
  }
  if (!(cfg.theta >= 0.5 && cfg.theta <= 1.0)) throw DomainError("step config: theta must lie in [0.5, 1]");
  if (!(cfg.safety >= 1.0 && cfg.safety <= 2.0)) throw DomainError("step config: safety must lie in [1, 2]");
  if (!(cfg.pos_floor >= 0.0)) throw DomainError("step config: pos_floor must be >= 0");
}

namespace {

bool admissible(const std::vector<double>& u, double floor) {
  return std::all_of(u.begin(), u.end(), [floor](double v) { return std::isfinite(v) && v >= floor; });
}

// Solves (I + theta dt M) delta = -dt M u^n for the increment delta = u* - u^n.
// Returns false if the trial violates the positivity floor.
bool try_step(const FrozenOperator& op, const BandedMatrix& m, const std::vector<double>& un,
              const std::vector<double>& mun, double theta, double dt, double floor, std::vector<double>& out) {
  std::vector<double> rhs(un.size());
  for (std::size_t i = 0; i < un.size(); ++i) rhs[i] = -dt * mun[i];

  BandedMatrix a = m;
  a.scale_and_shift(theta * dt, 1.0);
  const std::vector<double> delta = solve_banded({std::move(a), std::move(rhs)});

  // Conservative re-evaluation of the update through face fluxes.
  std::vector<double> blend(un.size());
  for (std::size_t i = 0; i < un.size(); ++i) blend[i] = un[i] + theta * delta[i];
  const std::vector<double> mb = op.apply(blend);
  out.resize(un.size());
  for (std::size_t i = 0; i < un.size(); ++i) out[i] = un[i] - dt * mb[i];
  return admissible(out, floor);
}

}  // namespace

StepResult step(const FilmState& state, const Grid& grid, const Model& model, const StepConfig& cfg, double dt) {
  validate(cfg);
  check_state(state, grid);
  if (!admissible(state.f, cfg.pos_floor) || !admissible(state.g, cfg.pos_floor) ||
      !admissible(state.gamma, cfg.pos_floor)) {
    throw DomainError("step: state below the positivity floor");
  }
  const FrozenOperator op(state, grid, model);
  const BandedMatrix m = op.assemble();
  const std::vector<double> un = state.pack();
  const std::vector<double> mun = op.apply(un);

  int rejections = 0;
  std::vector<double> next;
  while (!try_step(op, m, un, mun, cfg.theta, dt, cfg.pos_floor, next)) {
    dt *= 0.5;
    ++rejections;
    if (dt < cfg.dt_min) {
      throw StiffFailure("step size " + std::to_string(dt) + " fell below dt_min at t = " + std::to_string(state.t),
                         state);
    }
  }
  return {FilmState::unpack(next, state.t + dt), dt, rejections};
}

FilmState step(const FilmState& state, const Grid& grid, const Model& model, const StepConfig& cfg) {
  return step(state, grid, model, cfg, cfg.dt_init).state;
}

FilmState integrate(const FilmState& state0, const Grid& grid, const Model& model, const StepConfig& cfg,
                    double t_end, const Observer& observer, const IntegrateOptions& opts) {
  validate(cfg);
  check_state(state0, grid);
  if (t_end < state0.t) throw DomainError("integrate: t_end precedes the initial time");

  FilmState u = state0;
  StepInfo info;
  info.final = t_end == state0.t;
  if (observer) observer(u, info);
  if (info.final) return u;

  const std::size_t every = std::max<std::size_t>(1, opts.observe_every);
  double dt = cfg.dt_init;
  while (u.t < t_end) {
    const double remaining = t_end - u.t;
    const bool last = dt >= remaining;
    StepResult r = step(u, grid, model, cfg, last ? remaining : dt);
    const bool reached = last && r.rejections == 0;
    u = std::move(r.state);
    if (reached) u.t = t_end;
    ++info.index;
    info.dt = r.dt;
    info.final = reached;
    if (observer && (reached || info.index % every == 0)) observer(u, info);
    if (reached) break;
    dt = std::min(cfg.dt_max, std::max(cfg.dt_min, r.dt * cfg.safety));
  }
  return u;
}

}  // namespace thinfilm
