#pragma once

#include "qdyn/markovian.hpp"
#include "qdyn/spectral_density.hpp"
#include "qdyn/time_series.hpp"

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace qdyn {

struct BathParams {
  SpectralDensity sdf = SuperOhmicExp{};
  double temperature = 2e-3;  // k_B = 1
  /// Quadrature cut-off; 0 picks the point where the envelope
  /// J(ω)/ω·coth(ω/2T) falls below 1e-10 of its peak for good.
  double omega_max = 0.0;
  int points_per_period = 8;
  /// Refinement stops when successive Simpson sums agree to this fraction
  /// of ∫|integrand|.
  double rel_tol = 1e-6;
};

/// J(ω)/ω·coth(ω/2T), with coth replaced by 1/x + x/3 below ω = 1e-3·T.
double rate_envelope(const SpectralDensity& sdf, double temperature, double omega);

/// Automatic truncation frequency for `rate_envelope`. Throws QuadratureError
/// when the envelope has not decayed by 1e-10 within 1e7 characteristic scales.
double auto_omega_max(const SpectralDensity& sdf, double temperature);

/// γ(t) = ∫₀^ω_max J(ω)/ω·coth(ω/2T)·sin(ωt) dω by globally adaptive
/// composite Simpson over dyadic frequency blocks [W/2^{j+1}, W/2^j].
///
/// Every block starts with at least `points_per_period` nodes per period
/// 2π/t and the block with the largest |S_2n − S_n| is halved until the
/// summed disagreement is within rel_tol·∫|integrand|; the result carries a
/// Richardson correction. Envelope samples are cached per block and shared
/// by all t; evaluation is safe from several threads.
class DephasingRate {
 public:
  explicit DephasingRate(BathParams params);

  const BathParams& params() const noexcept { return params_; }
  double omega_max() const noexcept { return omega_max_; }

  /// γ(t) for t ≥ 0; γ(0) = 0. Throws QuadratureError when a block needs
  /// more than 2^22 panels.
  double operator()(double t) const;

  /// γ at each t, split over `threads` workers; the result does not depend
  /// on the thread count.
  std::vector<double> evaluate(std::span<const double> times, int threads = 1) const;

 private:
  using Samples = std::shared_ptr<const std::vector<double>>;
  Samples block_envelope(std::size_t block, int level) const;
  double block_start(std::size_t block) const noexcept;
  double block_width(std::size_t block) const noexcept;

  BathParams params_;
  double omega_max_;
  mutable std::mutex mutex_;
  mutable std::vector<Samples> cache_;
};

/// γ tabulated on a grid plus the first half-step value the RK4 start needs.
struct RateTable {
  TimeGrid grid;
  std::vector<double> values;  // γ(t_k), k = 0..steps
  double first_midpoint = 0.0;  // γ(t₀ + dt/2)

  static RateTable build(const DephasingRate& rate, const TimeGrid& grid, int threads = 1);
  /// Every `factor`-th sample of this table; `factor` must be 1 or even and
  /// divide the step count.
  RateTable coarsened(int factor) const;
};

/// ρ̇ = (γ(t)/2)(σᶻρσᶻ − ρ) by the two-step Adams predictor–corrector (PECE)
/// with an RK4 first step.
///
/// Columns: gamma, rho_eg (complex), coherence, nm_measure. Throws
/// NumericalStabilityError when dt·max|γ| > 1 or when populations, trace or
/// Hermiticity drift; warns above 0.1.
TimeSeries evolve_dephasing(const RateTable& rates, const DensityMatrix& rho0);

/// Σ_{i≠j} |ρ_ij|
double coherence(const ComplexMatrix& rho);

/// Running ½∫₀ᵗ(|γ| − γ)dτ by the trapezoidal rule on a uniform grid.
std::vector<double> nm_measure(std::span<const double> gamma, const TimeGrid& grid);

/// (|e⟩ + |g⟩)/√2 as a density matrix.
DensityMatrix equal_superposition();

}  // namespace qdyn
