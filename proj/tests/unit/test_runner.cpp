#include "qdyn/error.hpp"
#include "qdyn/runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qdyn_runner_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json dephasing_sweep(std::vector<double> alphas) {
  json doc = json::parse(R"({
    "experiment": "dephasing",
    "params": {"sdf": {"kind": "super_ohmic", "alpha": 0.5, "s": 2.5, "omega_c": 0.1}, "temperature": 0.002},
    "grid": {"t_start": 0.0, "t_end": 20.0, "steps": 40}
  })");
  doc["sweep"] = {{"param", "sdf.alpha"}, {"values", alphas}};
  return doc;
}

TEST(ExitCodes, Classification) {
  EXPECT_EQ(qdyn::classify(qdyn::ConfigError("x")), qdyn::ExitCode::ConfigError);
  EXPECT_EQ(qdyn::classify(qdyn::ParameterError("x")), qdyn::ExitCode::ConfigError);
  EXPECT_EQ(qdyn::classify(qdyn::ResourceError("x")), qdyn::ExitCode::ResourceRefusal);
  EXPECT_EQ(qdyn::classify(qdyn::DimensionLimitError("x")), qdyn::ExitCode::ResourceRefusal);
  EXPECT_EQ(qdyn::classify(qdyn::QuadratureError("x")), qdyn::ExitCode::NumericalFailure);
  EXPECT_EQ(qdyn::classify(qdyn::DecompositionError("x")), qdyn::ExitCode::NumericalFailure);
  EXPECT_EQ(static_cast<int>(qdyn::ExitCode::ResourceRefusal), 3);
}

TEST(Run, SinglePointWritesTheThreeFiles) {
  const fs::path dir = scratch("single");
  const auto cfg = qdyn::parse_config(json::parse(R"({
    "experiment": "two_spin",
    "params": {"J": 1.0, "B": 0.1},
    "grid": {"t_start": 0.0, "t_end": 6.0, "steps": 60}
  })"));
  const auto manifest = qdyn::run(cfg, {.threads = 1, .output_dir = dir});
  EXPECT_TRUE(manifest.ok());
  for (const char* f : {"series.csv", "summary.json", "manifest.json"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  const json m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["experiment"], "two_spin");
  EXPECT_EQ(m["qdyn_version"], std::string(qdyn::library_version()));
  EXPECT_TRUE(m["resources"]["within_budget"].get<bool>());
  const std::string csv = slurp(dir / "series.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,Mx,My,Mz,energy,norm");
}

TEST(Run, SweepOutputIsIndependentOfThreadCount) {
  const auto cfg = qdyn::parse_config(dephasing_sweep({0.5, 0.1, 0.3, 0.2}));
  const fs::path a = scratch("serial");
  const fs::path b = scratch("parallel");
  ASSERT_TRUE(qdyn::run(cfg, {.threads = 1, .output_dir = a}).ok());
  ASSERT_TRUE(qdyn::run(cfg, {.threads = 3, .output_dir = b}).ok());
  EXPECT_EQ(slurp(a / "series.csv"), slurp(b / "series.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  for (int i = 0; i < 4; ++i) {
    const fs::path p = fs::path("points") / ("point_00" + std::to_string(i)) / "series.csv";
    EXPECT_EQ(slurp(a / p), slurp(b / p)) << p;
  }
  const std::string table = slurp(a / "series.csv");
  EXPECT_EQ(table.find("sdf.alpha,"), 0u);
  EXPECT_EQ(table.find("sdf.alpha", 1), std::string::npos);
}

TEST(Run, FailedPointsAreRecordedAndOthersKept) {
  // α = 40 makes dt·max|γ| exceed 1 on this grid.
  const auto cfg = qdyn::parse_config(dephasing_sweep({0.5, 40.0}));
  const fs::path dir = scratch("partial");
  const auto manifest = qdyn::run(cfg, {.threads = 2, .output_dir = dir});
  ASSERT_EQ(manifest.failures.size(), 1u);
  EXPECT_EQ(manifest.failures[0].index, 1u);
  EXPECT_EQ(manifest.failures[0].code, qdyn::ExitCode::NumericalFailure);
  EXPECT_DOUBLE_EQ(*manifest.failures[0].sweep_value, 40.0);
  const json m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["status"], "failed");
  EXPECT_EQ(m["failures"][0]["category"], "numerical");
  EXPECT_DOUBLE_EQ(m["failures"][0]["params"]["sdf"]["alpha"].get<double>(), 40.0);
  EXPECT_TRUE(fs::exists(dir / "points" / "point_000" / "series.csv"));
  EXPECT_FALSE(fs::exists(dir / "points" / "point_001" / "series.csv"));
}

TEST(Run, WarningsReachTheManifest) {
  const auto cfg = qdyn::parse_config(json::parse(R"({
    "experiment": "two_spin",
    "params": {"J": 1.0, "B": 0.1},
    "grid": {"t_start": 0.0, "t_end": 60.0, "steps": 10}
  })"));
  const fs::path dir = scratch("warnings");
  const auto manifest = qdyn::run(cfg, {.threads = 1, .output_dir = dir});
  EXPECT_FALSE(manifest.document["warnings"].empty());
}

TEST(Run, OverBudgetRunsAreRefusedUpFront) {
  const auto cfg = qdyn::parse_config(json::parse(R"({
    "experiment": "ising_dqpt",
    "params": {"spins": 15, "alpha": 1.5, "B": 2.0},
    "grid": {"t_start": 0.0, "t_end": 1.0, "steps": 10}
  })"));
  const fs::path dir = scratch("refused");
  EXPECT_THROW(qdyn::run(cfg, {.threads = 1, .output_dir = dir}), qdyn::ResourceError);
  EXPECT_FALSE(fs::exists(dir / "manifest.json"));
}

TEST(Run, AtomicWriteLeavesNoTemporary) {
  const fs::path dir = scratch("atomic");
  fs::create_directories(dir);
  qdyn::write_file_atomically(dir / "x.txt", "hello");
  EXPECT_EQ(slurp(dir / "x.txt"), "hello");
  EXPECT_FALSE(fs::exists(dir / "x.txt.tmp"));
}

}  // namespace
