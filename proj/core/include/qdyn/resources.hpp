#pragma once

#include <cstdint>

namespace qdyn {

/// Storage cost of one dense dim×dim operator.
struct MemoryEstimate {
  std::int64_t hilbert_dim = 0;
  /// dim² × 8 × 10⁻⁹: counts real doubles, as in the usual rule of thumb.
  double real_double_gb = 0.0;
  /// dim² × 16 bytes: what a complex<double> matrix actually occupies.
  double complex_bytes = 0.0;
};

MemoryEstimate memory_estimate(std::int64_t hilbert_dim) noexcept;

/// Budget for a single dense complex operator. Defaults to 16·(2¹⁴)² bytes,
/// so the 14-spin limit is the largest accepted spin chain.
double memory_budget_bytes() noexcept;
void set_memory_budget_bytes(double bytes) noexcept;

/// Throws ResourceError quoting both estimates when dim exceeds the budget.
void require_within_budget(std::int64_t hilbert_dim, const char* what);

}  // namespace qdyn
