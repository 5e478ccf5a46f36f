#include "qdyn/resources.hpp"

#include "qdyn/error.hpp"
#include "qdyn/time_series.hpp"

#include <atomic>
#include <string>

namespace qdyn {

namespace {
std::atomic<double> g_budget_bytes{16.0 * 16384.0 * 16384.0};
}  // namespace

MemoryEstimate memory_estimate(std::int64_t hilbert_dim) noexcept {
  const auto d = static_cast<double>(hilbert_dim);
  MemoryEstimate e;
  e.hilbert_dim = hilbert_dim;
  e.real_double_gb = d * d * 8.0 * 1e-9;
  e.complex_bytes = d * d * 16.0;
  return e;
}

double memory_budget_bytes() noexcept { return g_budget_bytes.load(); }

void set_memory_budget_bytes(double bytes) noexcept { g_budget_bytes.store(bytes); }

void require_within_budget(std::int64_t hilbert_dim, const char* what) {
  const MemoryEstimate e = memory_estimate(hilbert_dim);
  if (e.complex_bytes > memory_budget_bytes()) {
    throw ResourceError(std::string(what) + ": Hilbert dimension " + std::to_string(hilbert_dim) +
                        " needs " + format_double(e.complex_bytes * 1e-9) +
                        " GB per complex operator (" + format_double(e.real_double_gb) +
                        " GB counting real doubles), budget is " +
                        format_double(memory_budget_bytes() * 1e-9) + " GB");
  }
}

}  // namespace qdyn
