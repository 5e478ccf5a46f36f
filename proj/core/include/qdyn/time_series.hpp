#pragma once

#include "qdyn/linalg.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qdyn {

/// Uniform grid t_k = t_start + k·dt, k = 0..steps (steps+1 samples).
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int steps);

  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  int steps() const noexcept { return steps_; }
  std::size_t samples() const noexcept { return static_cast<std::size_t>(steps_) + 1; }
  double dt() const noexcept { return (t_end_ - t_start_) / steps_; }
  double time(std::size_t k) const noexcept;
  std::vector<double> times() const;

  /// Same interval, steps multiplied by `factor`.
  TimeGrid refined(int factor) const;

  /// Returns a warning when dt·rate_scale exceeds `threshold`, the step-size
  /// rule dt ≪ 1/scale used by every propagator.
  std::optional<std::string> step_warning(double rate_scale, double threshold,
                                          std::string_view context) const;

 private:
  double t_start_;
  double t_end_;
  int steps_;
};

/// Time-stamped observable records. Complex columns are written to CSV as
/// `<name>_re`, `<name>_im`.
class TimeSeries {
 public:
  using Column = std::variant<std::vector<double>, std::vector<Complex>>;

  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> times) : times_(std::move(times)) {}

  const std::vector<double>& times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }

  void add_real(std::string name, std::vector<double> values);
  void add_complex(std::string name, std::vector<Complex> values);

  bool has(std::string_view name) const noexcept;
  const std::vector<double>& real(std::string_view name) const;
  const std::vector<Complex>& complex(std::string_view name) const;
  std::vector<std::string> column_names() const;

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  /// CSV with a `t` column first, 17 significant digits, every `stride`-th
  /// row (the last row is always written).
  void write_csv(std::ostream& out, std::size_t stride = 1) const;

 private:
  const Column& find(std::string_view name) const;

  std::vector<double> times_;
  std::vector<std::pair<std::string, Column>> columns_;
  std::vector<std::string> warnings_;
};

/// Decimal form with 17 significant digits ("nan" for NaN).
std::string format_double(double v);

}  // namespace qdyn
