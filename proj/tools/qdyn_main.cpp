#include "qdyn/error.hpp"
#include "qdyn/experiment_config.hpp"
#include "qdyn/experiments.hpp"
#include "qdyn/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

int code(qdyn::ExitCode c) { return static_cast<int>(c); }

int cmd_run(const std::string& path, std::optional<int> threads, std::optional<std::string> output) {
  const qdyn::ExperimentConfig cfg = qdyn::load_config(path);
  qdyn::RunOptions opts;
  opts.threads = threads;
  if (output) opts.output_dir = *output;
  const qdyn::RunManifest manifest = qdyn::run(cfg, opts);
  const auto& files = manifest.document["files"];
  std::cout << qdyn::experiment_name(cfg.experiment) << ": " << cfg.points.size() << " point(s), "
            << files.size() << " file(s) in " << manifest.directory.generic_string() << '\n';
  for (const auto& w : manifest.document["warnings"]) {
    std::cerr << "warning: " << w["message"].get<std::string>() << '\n';
  }
  if (manifest.ok()) return 0;
  for (const auto& f : manifest.failures) {
    std::cerr << "error: point " << f.index;
    if (f.sweep_value) std::cerr << " (" << *cfg.sweep_param << " = " << *f.sweep_value << ")";
    std::cerr << ": " << f.message << '\n';
  }
  return code(manifest.failures.front().code);
}

int cmd_estimate(const std::string& path) {
  const qdyn::ExperimentConfig cfg = qdyn::load_config(path);
  const qdyn::ResourceEstimate e = qdyn::estimate_resources(cfg);
  nlohmann::json j = e.to_json();
  j["experiment"] = std::string(qdyn::experiment_name(cfg.experiment));
  j["points"] = cfg.points.size();
  std::cout << j.dump(2) << '\n';
  if (!e.within_budget) {
    std::cerr << "error: run would exceed the memory budget\n";
    return code(qdyn::ExitCode::ResourceRefusal);
  }
  return 0;
}

int cmd_list() {
  for (const auto e : qdyn::kAllExperiments) {
    std::cout << qdyn::experiment_name(e) << "\t" << qdyn::experiment_summary(e) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdyn: closed, Markovian and non-Markovian quantum dynamics experiments"};
  app.set_version_flag("--version", std::string(qdyn::library_version()));
  app.require_subcommand(1);

  std::string run_config;
  std::optional<int> threads;
  std::optional<std::string> output;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("config", run_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--threads", threads, "Worker threads for sweep points")->check(CLI::PositiveNumber);
  run->add_option("--output", output, "Output directory (overrides output_dir)");

  std::string estimate_config;
  auto* estimate = app.add_subcommand("estimate", "Report the memory estimate for a config");
  estimate->add_option("config", estimate_config, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  auto* list = app.add_subcommand("list-experiments", "List the available experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(qdyn::ExitCode::ConfigError);
  }

  try {
    if (run->parsed()) return cmd_run(run_config, threads, output);
    if (estimate->parsed()) return cmd_estimate(estimate_config);
    if (list->parsed()) return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(qdyn::classify(e));
  }
  return 0;
}
