#pragma once

#include "qdyn/dephasing.hpp"
#include "qdyn/kinks.hpp"
#include "qdyn/models.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qdyn {

enum class Experiment { TwoSpin, IsingDqpt, CavitySweep, OpenIsing, TlsPhoton, Dephasing };

inline constexpr std::array<Experiment, 6> kAllExperiments = {
    Experiment::TwoSpin,   Experiment::IsingDqpt, Experiment::CavitySweep,
    Experiment::OpenIsing, Experiment::TlsPhoton, Experiment::Dephasing};

std::string_view experiment_name(Experiment e) noexcept;
std::string_view experiment_summary(Experiment e) noexcept;
/// Throws ConfigError for unknown names.
Experiment experiment_from_name(std::string_view name);

struct TwoSpinParams {
  double coupling = 1.0;
  double field = 0.1;
  std::string initial = "down_down";  // or "up_up"
};

struct IsingDqptParams {
  IsingParams model;
  std::string initial = "right";  // ⊗|→⟩; "left" for ⊗|←⟩
};

struct CavityParams {
  CavityArrayParams model;  // omega_a is derived from the detuning
  double log10_detuning_over_g = 0.0;
  bool run_jch = true;
  bool run_rh = true;
};

struct OpenIsingParams {
  double coupling = 1.0;
  double field = 0.1;
  std::vector<double> gammas{0.04, 0.04};
  double tol = kDefaultSpectralTol;
  std::string initial = "down_down";
};

struct TlsParams {
  double rabi = 1.0;
  double gamma0 = 0.2;
  double photons = 0.0;
  double tol = kDefaultSpectralTol;
  std::string initial = "ground";  // or "excited"
};

struct DephasingParams {
  BathParams bath;
};

using ExperimentParams = std::variant<TwoSpinParams, IsingDqptParams, CavityParams,
                                      OpenIsingParams, TlsParams, DephasingParams>;

struct GridSpec {
  double t_start = 0.0;
  double t_end = 1.0;
  int steps = 100;
  /// "natural" or "hopping"; the latter reads times as J·t.
  std::string units = "natural";

  TimeGrid grid() const { return TimeGrid(t_start, t_end, steps); }
};

/// One fully validated parameter set; a sweep yields one per value.
struct RunPoint {
  std::optional<double> sweep_value;
  nlohmann::json params;  // the raw block with the sweep value substituted
  ExperimentParams typed;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::TwoSpin;
  std::string description;
  GridSpec grid;
  std::optional<std::string> sweep_param;
  std::vector<RunPoint> points;  // sorted by sweep value
  int threads = 1;
  std::filesystem::path output_dir = "runs";
  std::size_t record_every = 1;
  KinkOptions kinks;
  nlohmann::json source;  // the document as read
};

/// Validates the whole document, including every sweep point's parameters,
/// and throws ConfigError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace qdyn
