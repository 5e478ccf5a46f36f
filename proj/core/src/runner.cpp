#include "qdyn/runner.hpp"

#include "qdyn/error.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef QDYN_VERSION
#define QDYN_VERSION "0.0.0"
#endif

namespace qdyn {

std::string_view library_version() noexcept { return QDYN_VERSION; }

ExitCode classify(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr ||
      dynamic_cast<const ParameterError*>(&e) != nullptr ||
      dynamic_cast<const ShapeError*>(&e) != nullptr ||
      dynamic_cast<const SymmetryError*>(&e) != nullptr ||
      dynamic_cast<const ModelError*>(&e) != nullptr) {
    return ExitCode::ConfigError;
  }
  if (dynamic_cast<const ResourceError*>(&e) != nullptr ||
      dynamic_cast<const DimensionLimitError*>(&e) != nullptr ||
      dynamic_cast<const std::bad_alloc*>(&e) != nullptr) {
    return ExitCode::ResourceRefusal;
  }
  return ExitCode::NumericalFailure;
}

std::string_view category_name(ExitCode code) noexcept {
  switch (code) {
    case ExitCode::Ok: return "ok";
    case ExitCode::ConfigError: return "config";
    case ExitCode::ResourceRefusal: return "resource";
    case ExitCode::NumericalFailure: return "numerical";
  }
  return "numerical";
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

struct Slot {
  std::optional<PointOutput> output;
  std::optional<RunFailure> failure;
};

std::string csv_of(const TimeSeries& series, std::size_t stride) {
  std::ostringstream out;
  series.write_csv(out, stride);
  return out.str();
}

std::string point_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "point_%03zu", index);
  return buf;
}

// One row per sweep point with every numeric scalar the summaries share.
std::string sweep_table(const std::string& param, const std::vector<RunPoint>& points,
                        const std::vector<Slot>& slots) {
  std::vector<std::string> keys;
  const nlohmann::json* first = nullptr;
  for (const auto& s : slots) {
    if (s.output) {
      first = &s.output->summary;
      break;
    }
  }
  if (first != nullptr) {
    for (const auto& [key, value] : first->items()) {
      if (!value.is_number() || key == "sweep_value" || key == param) continue;
      bool shared = true;
      for (const auto& s : slots) {
        if (s.output && !(s.output->summary.contains(key) && s.output->summary[key].is_number())) {
          shared = false;
        }
      }
      if (shared) keys.push_back(key);
    }
  }
  std::ostringstream out;
  out << param;
  for (const auto& k : keys) out << ',' << k;
  out << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << format_double(*points[i].sweep_value);
    for (const auto& k : keys) {
      const double v = slots[i].output ? slots[i].output->summary[k].get<double>()
                                       : std::numeric_limits<double>::quiet_NaN();
      out << ',' << format_double(v);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json failure_json(const RunFailure& f) {
  nlohmann::json j{{"index", f.index},
                   {"params", f.params},
                   {"category", std::string(category_name(f.code))},
                   {"message", f.message}};
  j["sweep_value"] = f.sweep_value ? nlohmann::json(*f.sweep_value) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

RunManifest run(const ExperimentConfig& config, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const ResourceEstimate estimate = estimate_resources(config);
  require_resources(estimate);

  const int threads = std::max(1, options.threads.value_or(config.threads));
  RunManifest manifest;
  manifest.directory = options.output_dir.value_or(config.output_dir);
  std::filesystem::create_directories(manifest.directory);

  const std::size_t count = config.points.size();
  std::vector<Slot> slots(count);
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  const int inner_threads = count == 1 ? threads : 1;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const RunPoint& point = config.points[i];
      try {
        slots[i].output = run_point(config, point, inner_threads);
      } catch (const std::exception& e) {
        slots[i].failure = RunFailure{i, point.sweep_value, point.params, classify(e), e.what()};
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  nlohmann::json files = nlohmann::json::array();
  nlohmann::json warnings = nlohmann::json::array();
  auto emit = [&](const std::filesystem::path& rel, const std::string& contents) {
    const auto full = manifest.directory / rel;
    std::filesystem::create_directories(full.parent_path());
    write_file_atomically(full, contents);
    files.push_back(rel.generic_string());
  };

  const bool sweep = config.sweep_param.has_value();
  nlohmann::json point_summaries = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i) {
    if (slots[i].failure) {
      manifest.failures.push_back(*slots[i].failure);
      point_summaries.push_back({{"index", i}, {"status", "failed"}, {"error", slots[i].failure->message}});
      continue;
    }
    const PointOutput& out = *slots[i].output;
    const std::filesystem::path base = sweep ? std::filesystem::path("points") / point_dir_name(i)
                                             : std::filesystem::path();
    emit(base / "series.csv", csv_of(out.series, config.record_every));
    emit(base / "summary.json", out.summary.dump(2) + "\n");
    for (const auto& [name, contents] : out.extra_files) emit(base / name, contents);
    for (const auto& w : out.warnings) {
      nlohmann::json entry{{"point", i}, {"message", w}};
      if (config.points[i].sweep_value) entry["sweep_value"] = *config.points[i].sweep_value;
      warnings.push_back(std::move(entry));
    }
    if (sweep) point_summaries.push_back(out.summary);
  }
  if (sweep) {
    emit("series.csv", sweep_table(*config.sweep_param, config.points, slots));
    nlohmann::json summary{{"experiment", std::string(experiment_name(config.experiment))},
                           {"sweep_param", *config.sweep_param},
                           {"points", point_summaries}};
    emit("summary.json", summary.dump(2) + "\n");
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::json doc{{"qdyn_version", std::string(library_version())},
                     {"experiment", std::string(experiment_name(config.experiment))},
                     {"description", config.description},
                     {"config", config.source},
                     {"threads", threads},
                     {"output_dir", manifest.directory.generic_string()},
                     {"wall_time_seconds", wall},
                     {"resources", estimate.to_json()},
                     {"files", files},
                     {"warnings", warnings},
                     {"status", manifest.failures.empty() ? "ok" : "failed"}};
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : manifest.failures) failures.push_back(failure_json(f));
  doc["failures"] = failures;
  manifest.document = doc;
  write_file_atomically(manifest.directory / "manifest.json", doc.dump(2) + "\n");
  return manifest;
}

}  // namespace qdyn
