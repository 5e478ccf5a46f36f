#pragma once

#include <span>
#include <vector>

namespace qdyn {

struct KinkOptions {
  /// A sample is a kink candidate when |Δ²Λ| exceeds this multiple of the
  /// median |Δ²Λ| over the series.
  double threshold = 10.0;
  /// Second differences at or below this value are never kinks; keeps
  /// smooth series with a near-zero median from triggering.
  double floor = 1e-12;
};

/// Times of non-analytic points in a uniformly sampled series. Adjacent
/// candidate indices form one cluster reported at its largest |Δ²Λ|.
/// Throws ParameterError for fewer than 5 samples or mismatched sizes.
std::vector<double> detect_kinks(std::span<const double> times, std::span<const double> values,
                                 const KinkOptions& options = {});

}  // namespace qdyn
