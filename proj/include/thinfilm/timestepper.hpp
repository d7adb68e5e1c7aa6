#pragma once

// Linearly implicit theta scheme: mobility frozen at u^n, derivatives implicit,
//
//   (I + theta dt M(u^n)) u* = u^n - (1 - theta) dt M(u^n) u^n,
//
// solved with a banded LU. The accepted update is then re-evaluated in flux
// form, u^{n+1} = u^n - dt M(u^n) (theta u* + (1 - theta) u^n), so the cell
// masses telescope exactly regardless of the linear-solve residual.

#include <cstddef>
#include <functional>

#include "thinfilm/discretization.hpp"
#include "thinfilm/model.hpp"

namespace thinfilm {

struct StepConfig {
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 1e-1;
  double safety = 1.2;  // growth factor after an accepted step, <= 2
  double theta = 1.0;
  double pos_floor = 1e-10;
};

/// Throws DomainError unless 0 < dt_min <= dt_init <= dt_max, theta in [1/2, 1],
/// 1 <= safety <= 2 and pos_floor >= 0.
void validate(const StepConfig& cfg);

/// The step size fell below dt_min; carries the last admissible state.
class StiffFailure : public Error {
 public:
  StiffFailure(const std::string& what, FilmState state) : Error(what), state_(std::move(state)) {}
  const FilmState& state() const { return state_; }

 private:
  FilmState state_;
};

struct StepResult {
  FilmState state;
  double dt = 0.0;         // step actually taken
  int rejections = 0;      // halvings before acceptance
};

/// One step starting with `dt`, halving on positivity violations.
StepResult step(const FilmState& state, const Grid& grid, const Model& model, const StepConfig& cfg, double dt);

/// One step with cfg.dt_init.
FilmState step(const FilmState& state, const Grid& grid, const Model& model, const StepConfig& cfg);

struct StepInfo {
  std::size_t index = 0;  // accepted steps so far
  double dt = 0.0;        // last accepted step (0 before the first)
  bool final = false;
};

using Observer = std::function<void(const FilmState&, const StepInfo&)>;

/// Observer is called on the initial state, every `observe_every` accepted steps,
/// and on the final state.
struct IntegrateOptions {
  std::size_t observe_every = 1;
};

FilmState integrate(const FilmState& state0, const Grid& grid, const Model& model, const StepConfig& cfg,
                    double t_end, const Observer& observer = {}, const IntegrateOptions& opts = {});

}  // namespace thinfilm
