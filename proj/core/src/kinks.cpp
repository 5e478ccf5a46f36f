#include "qdyn/kinks.hpp"

#include "qdyn/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdyn {

std::vector<double> detect_kinks(std::span<const double> times, std::span<const double> values,
                                 const KinkOptions& options) {
  if (times.size() != values.size()) {
    throw ParameterError("detect_kinks: times and values differ in length");
  }
  if (values.size() < 5) {
    throw ParameterError("detect_kinks: need at least 5 samples, got " +
                         std::to_string(values.size()));
  }
  const std::size_t n = values.size();
  std::vector<double> d2(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    d2[k] = std::abs(values[k + 1] - 2.0 * values[k] + values[k - 1]);
  }
  std::vector<double> sorted(d2.begin() + 1, d2.end() - 1);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double cut = std::max(options.threshold * median, options.floor);

  std::vector<double> kinks;
  std::size_t k = 1;
  while (k + 1 < n) {
    if (d2[k] <= cut) {
      ++k;
      continue;
    }
    std::size_t best = k;
    while (k + 1 < n && d2[k] > cut) {
      if (d2[k] > d2[best]) best = k;
      ++k;
    }
    kinks.push_back(times[best]);
  }
  return kinks;
}

}  // namespace qdyn
