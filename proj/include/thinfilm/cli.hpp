#pragma once

// Command implementations behind the thinfilm executable. Each returns the
// process exit code and reports failures on stderr.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "thinfilm/config.hpp"
#include "thinfilm/diagnostics.hpp"

namespace thinfilm {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitStiff = 2, kExitVerdictFail = 3 };

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;  // overrides io.out_dir
  std::optional<Eigen::Matrix2d> neg_symbol;     // ls-check on a supplied -a_tilde
  bool sample_lambda = false;
};

int cmd_simulate(const CommandOptions& opts);
int cmd_analyze_equilibrium(const CommandOptions& opts);
int cmd_ls_check(const CommandOptions& opts);
int cmd_decay_study(const CommandOptions& opts);

struct SimulationOutcome {
  std::vector<SeriesRecord> series;
  FilmState final_state;
  std::size_t steps = 0;
  std::vector<std::filesystem::path> snapshots;
  bool stiff = false;
  std::string failure;
};

/// Integrates `cfg` and writes series.csv, snapshots and run.json into `out_dir`.
/// A stiff failure is reported in the outcome; outputs up to that point are kept.
SimulationOutcome run_simulation(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string series_csv(std::span<const SeriesRecord> series);
std::string snapshot_csv(const FilmState& state, const Grid& grid);
/// "snapshot_<t in %.6e>.csv"
std::string snapshot_name(double t);

}  // namespace thinfilm
