#pragma once

// Run configuration. Accepts INI ("[section]" headers, "key = value", '#' or ';'
// comments) or JSON with the same section/key layout (detected by a leading '{').

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thinfilm/discretization.hpp"
#include "thinfilm/model.hpp"
#include "thinfilm/stability.hpp"
#include "thinfilm/timestepper.hpp"

namespace thinfilm {

/// Invalid or incomplete configuration; the message names the key and, for INI, the line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Mode {
  Field field = Field::F;
  int index = 1;           // cos(index pi x / L)
  double amplitude = 0.0;
};

struct InitialCondition {
  double f_mean = 1.0, g_mean = 1.0, gamma_mean = 0.0;
  std::vector<Mode> modes;
};

struct IOConfig {
  std::string out_dir = "out";
  std::size_t snapshot_every = 0;  // accepted steps; 0 keeps only the first and last
  std::size_t series_every = 1;
};

struct RunConfig {
  ModelKind kind = ModelKind::Gravity;
  PhysParams params;
  double beta = 0.0;
  std::size_t n_cells = 128;
  double t_end = 1.0;
  StepConfig step;
  InitialCondition ic;
  IOConfig io;
  std::optional<Equilibrium> equilibrium;
  bool sample_lambda = false;
  double discard_fraction = 0.2;

  Model model() const;
  Grid grid() const;
  /// Flat target of the run: the [equilibrium] section or the IC means.
  Equilibrium target() const;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Resolved configuration in the JSON layout accepted by parse_config.
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// mean + sum amplitude cos(j pi x / L) at the cell centres; throws DomainError
/// unless every value is strictly positive.
FilmState initial_state(const RunConfig& cfg, const Grid& grid);

std::string_view field_name(Field field);

}  // namespace thinfilm
