#include "qdyn/time_series.hpp"

#include "qdyn/error.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace qdyn {

TimeGrid::TimeGrid(double t_start, double t_end, int steps)
    : t_start_(t_start), t_end_(t_end), steps_(steps) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw ParameterError("TimeGrid: require finite t_end > t_start");
  }
  if (steps < 1) {
    throw ParameterError("TimeGrid: steps must be positive");
  }
}

double TimeGrid::time(std::size_t k) const noexcept {
  return t_start_ + (t_end_ - t_start_) * static_cast<double>(k) / steps_;
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(samples());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = time(k);
  return t;
}

TimeGrid TimeGrid::refined(int factor) const {
  if (factor < 1) throw ParameterError("TimeGrid::refined: factor must be positive");
  return TimeGrid(t_start_, t_end_, steps_ * factor);
}

std::optional<std::string> TimeGrid::step_warning(double rate_scale, double threshold,
                                                  std::string_view context) const {
  const double product = dt() * rate_scale;
  if (product > threshold) {
    return std::string(context) + ": dt=" + format_double(dt()) + " times rate scale " +
           format_double(rate_scale) + " = " + format_double(product) + " exceeds " +
           format_double(threshold);
  }
  return std::nullopt;
}

void TimeSeries::add_real(std::string name, std::vector<double> values) {
  if (values.size() != times_.size()) {
    throw ShapeError("TimeSeries: column '" + name + "' has " + std::to_string(values.size()) +
                     " samples, expected " + std::to_string(times_.size()));
  }
  columns_.emplace_back(std::move(name), std::move(values));
}

void TimeSeries::add_complex(std::string name, std::vector<Complex> values) {
  if (values.size() != times_.size()) {
    throw ShapeError("TimeSeries: column '" + name + "' has " + std::to_string(values.size()) +
                     " samples, expected " + std::to_string(times_.size()));
  }
  columns_.emplace_back(std::move(name), std::move(values));
}

bool TimeSeries::has(std::string_view name) const noexcept {
  for (const auto& [n, c] : columns_) {
    if (n == name) return true;
  }
  return false;
}

const TimeSeries::Column& TimeSeries::find(std::string_view name) const {
  for (const auto& [n, c] : columns_) {
    if (n == name) return c;
  }
  throw ShapeError("TimeSeries: no column '" + std::string(name) + "'");
}

const std::vector<double>& TimeSeries::real(std::string_view name) const {
  const auto* v = std::get_if<std::vector<double>>(&find(name));
  if (v == nullptr) throw ShapeError("TimeSeries: column '" + std::string(name) + "' is complex");
  return *v;
}

const std::vector<Complex>& TimeSeries::complex(std::string_view name) const {
  const auto* v = std::get_if<std::vector<Complex>>(&find(name));
  if (v == nullptr) throw ShapeError("TimeSeries: column '" + std::string(name) + "' is real");
  return *v;
}

std::vector<std::string> TimeSeries::column_names() const {
  std::vector<std::string> names;
  for (const auto& [n, c] : columns_) names.push_back(n);
  return names;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void TimeSeries::write_csv(std::ostream& out, std::size_t stride) const {
  if (stride == 0) stride = 1;
  out << 't';
  for (const auto& [name, col] : columns_) {
    if (std::holds_alternative<std::vector<double>>(col)) {
      out << ',' << name;
    } else {
      out << ',' << name << "_re," << name << "_im";
    }
  }
  out << '\n';
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (k % stride != 0 && k + 1 != times_.size()) continue;
    out << format_double(times_[k]);
    for (const auto& [name, col] : columns_) {
      if (const auto* r = std::get_if<std::vector<double>>(&col)) {
        out << ',' << format_double((*r)[k]);
      } else {
        const auto& c = std::get<std::vector<Complex>>(col)[k];
        out << ',' << format_double(c.real()) << ',' << format_double(c.imag());
      }
    }
    out << '\n';
  }
}

}  // namespace qdyn
