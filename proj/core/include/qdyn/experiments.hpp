#pragma once

#include "qdyn/experiment_config.hpp"
#include "qdyn/time_series.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qdyn {

struct ResourceEstimate {
  std::int64_t hilbert_dim = 0;
  double real_gb = 0.0;   // dim² × 8 × 10⁻⁹
  double complex_gb = 0.0;         // dim² × 16 × 10⁻⁹
  std::optional<std::int64_t> liouvillian_dim;
  double liouvillian_complex_gb = 0.0;
  double budget_gb = 0.0;
  bool within_budget = true;

  nlohmann::json to_json() const;
};

/// Largest Hilbert (and Liouvillian) dimension over all sweep points.
ResourceEstimate estimate_resources(const ExperimentConfig& config);

/// Throws ResourceError quoting both estimates when the run does not fit.
void require_resources(const ResourceEstimate& estimate);

struct PointOutput {
  TimeSeries series;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> warnings;
  /// Additional files (name, contents) written next to series.csv.
  std::vector<std::pair<std::string, std::string>> extra_files;
};

/// Runs one parameter point. `threads` is used inside the point only where
/// the result does not depend on it (dephasing rate tabulation).
PointOutput run_point(const ExperimentConfig& config, const RunPoint& point, int threads = 1);

}  // namespace qdyn
