#pragma once

#include "qdyn/experiment_config.hpp"
#include "qdyn/experiments.hpp"

#include <nlohmann/json.hpp>

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qdyn {

std::string_view library_version() noexcept;

/// Process exit codes of the command-line runner.
enum class ExitCode : int { Ok = 0, ConfigError = 2, ResourceRefusal = 3, NumericalFailure = 4 };

/// Maps a library exception onto the exit code contract; anything that is
/// not a configuration or resource problem counts as a numerical failure.
ExitCode classify(const std::exception& e) noexcept;
std::string_view category_name(ExitCode code) noexcept;

struct RunOptions {
  std::optional<int> threads;
  std::optional<std::filesystem::path> output_dir;
};

struct RunFailure {
  std::size_t index = 0;
  std::optional<double> sweep_value;
  nlohmann::json params;
  ExitCode code = ExitCode::NumericalFailure;
  std::string message;
};

struct RunManifest {
  std::filesystem::path directory;
  nlohmann::json document;
  std::vector<RunFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
};

/// Runs every point on a pool of `threads` workers and writes
/// series.csv, summary.json and manifest.json (per-point files under
/// points/ for sweeps). Outputs are assembled in sweep order, so their
/// content does not depend on scheduling. Point failures are recorded in the
/// manifest with the failing parameters; completed points are kept.
/// Throws ResourceError before any work when the estimate exceeds the budget.
RunManifest run(const ExperimentConfig& config, const RunOptions& options = {});

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace qdyn
