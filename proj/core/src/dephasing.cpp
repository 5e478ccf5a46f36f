#include "qdyn/dephasing.hpp"

#include "qdyn/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

namespace qdyn {

namespace {

constexpr int kMaxLevel = 22;
constexpr int kMinLevel = 6;
constexpr std::size_t kResyncEvery = 512;
constexpr std::size_t kBlocks = 16;

struct SimpsonPair {
  double value = 0.0;
  double absolute = 0.0;  // the same rule applied to |integrand|
};

int level_of(const std::vector<double>& samples) {
  return std::bit_width(samples.size() - 1) - 1;
}

// Composite Simpson of env(ω)·sin(ωt) on [a, a + width] with 2^level panels,
// reading every stride-th entry of samples taken at 2^sample_level panels.
SimpsonPair simpson(const std::vector<double>& env, int sample_level, int level, double a,
                    double width, double t) {
  const std::size_t n = std::size_t{1} << level;
  const std::size_t stride = std::size_t{1} << (sample_level - level);
  const double h = std::ldexp(width, -level);
  const std::complex<double> rotation = std::polar(1.0, h * t);
  std::complex<double> phase;
  SimpsonPair sum;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k % kResyncEvery == 0) {
      phase = std::polar(1.0, (a + h * static_cast<double>(k)) * t);
    } else {
      phase *= rotation;
    }
    const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const double f = env[k * stride] * phase.imag();
    sum.value += weight * f;
    sum.absolute += weight * std::abs(f);
  }
  sum.value *= h / 3.0;
  sum.absolute *= h / 3.0;
  return sum;
}

}  // namespace

double rate_envelope(const SpectralDensity& sdf, double temperature, double omega) {
  if (omega <= 0.0) return 0.0;
  const double j_over_w = sdf_eval(sdf, omega) / omega;
  double coth;
  if (omega < 1e-3 * temperature) {
    const double x = omega / (2.0 * temperature);
    coth = 1.0 / x + x / 3.0;
  } else {
    coth = 1.0 / std::tanh(omega / (2.0 * temperature));
  }
  return j_over_w * coth;
}

double auto_omega_max(const SpectralDensity& sdf, double temperature) {
  const double scale = sdf_scale(sdf);
  constexpr int kPerDecade = 1000;
  constexpr int kDecades = 13;  // 1e-6·scale .. 1e7·scale
  const int count = kPerDecade * kDecades + 1;
  std::vector<double> omega(static_cast<std::size_t>(count));
  std::vector<double> env(omega.size());
  double peak = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    omega[k] = scale * std::pow(10.0, -6.0 + static_cast<double>(i) / kPerDecade);
    env[k] = rate_envelope(sdf, temperature, omega[k]);
    peak = std::max(peak, env[k]);
  }
  const double threshold = 1e-10 * peak;
  if (env.back() >= threshold) {
    throw QuadratureError("auto_omega_max: envelope still above 1e-10 of its peak at omega=" +
                          format_double(omega.back()));
  }
  std::size_t last = omega.size() - 1;
  while (last > 0 && env[last - 1] < threshold) --last;
  return omega[last];
}

DephasingRate::DephasingRate(BathParams params) : params_(std::move(params)) {
  validate(params_.sdf);
  if (!std::isfinite(params_.temperature) || !(params_.temperature > 0.0)) {
    throw ParameterError("bath: temperature must be finite and positive");
  }
  if (!(sdf_exponent(params_.sdf) > 1.0)) {
    throw ParameterError("bath: the rate integral needs s > 1 (integrable at omega = 0)");
  }
  if (params_.points_per_period < 8) {
    throw ParameterError("bath: points_per_period must be at least 8");
  }
  if (!(params_.rel_tol > 0.0)) {
    throw ParameterError("bath: rel_tol must be positive");
  }
  const double automatic = auto_omega_max(params_.sdf, params_.temperature);
  if (params_.omega_max == 0.0) {
    omega_max_ = automatic;
  } else {
    if (!std::isfinite(params_.omega_max) || params_.omega_max < automatic) {
      throw ParameterError("bath: omega_max=" + format_double(params_.omega_max) +
                           " truncates the integrand above 1e-10 of its peak; use at least " +
                           format_double(automatic));
    }
    omega_max_ = params_.omega_max;
  }
}

double DephasingRate::block_start(std::size_t block) const noexcept {
  return block + 1 == kBlocks ? 0.0 : std::ldexp(omega_max_, -static_cast<int>(block) - 1);
}

double DephasingRate::block_width(std::size_t block) const noexcept {
  // Blocks are numbered from the top: 0 is [W/2, W], the last one [0, W/2^(K-1)].
  return std::ldexp(omega_max_, -static_cast<int>(std::min(block + 1, kBlocks - 1)));
}

DephasingRate::Samples DephasingRate::block_envelope(std::size_t block, int level) const {
  std::lock_guard lock(mutex_);
  if (cache_.empty()) cache_.resize(kBlocks);
  Samples& slot = cache_[block];
  if (!slot || level_of(*slot) < level) {
    const std::size_t n = std::size_t{1} << level;
    auto values = std::make_shared<std::vector<double>>(n + 1);
    const double a = block_start(block);
    const double h = std::ldexp(block_width(block), -level);
    for (std::size_t k = 0; k <= n; ++k) {
      (*values)[k] = rate_envelope(params_.sdf, params_.temperature, a + h * static_cast<double>(k));
    }
    slot = std::move(values);
  }
  return slot;
}

namespace {

struct BlockState {
  int level = 0;
  SimpsonPair coarse{};
  SimpsonPair fine{};
  double error() const { return std::abs(fine.value - coarse.value); }
};

}  // namespace

double DephasingRate::operator()(double t) const {
  if (!std::isfinite(t) || t < 0.0) {
    throw ParameterError("dephasing_rate: t must be finite and non-negative");
  }
  if (t == 0.0) return 0.0;

  std::vector<BlockState> blocks(kBlocks);
  auto evaluate_block = [&](std::size_t j, int level) {
    const Samples env = block_envelope(j, level);
    return simpson(*env, level_of(*env), level, block_start(j), block_width(j), t);
  };
  for (std::size_t j = 0; j < kBlocks; ++j) {
    const double needed = params_.points_per_period * block_width(j) * t / (2.0 * std::numbers::pi);
    int level = kMinLevel;
    while (level < kMaxLevel - 1 && std::ldexp(1.0, level) < needed) ++level;
    blocks[j].level = level;
    blocks[j].coarse = evaluate_block(j, level);
    blocks[j].fine = evaluate_block(j, level + 1);
  }

  while (true) {
    double error = 0.0;
    double magnitude = 0.0;
    std::size_t worst = 0;
    for (std::size_t j = 0; j < kBlocks; ++j) {
      error += blocks[j].error();
      magnitude += blocks[j].fine.absolute;
      if (blocks[j].error() > blocks[worst].error()) worst = j;
    }
    if (error <= params_.rel_tol * magnitude) break;
    BlockState& b = blocks[worst];
    if (b.level + 2 > kMaxLevel) {
      throw QuadratureError("dephasing_rate: no convergence at t=" + format_double(t) +
                            "; refinement disagreement " + format_double(error) +
                            " against tolerance " + format_double(params_.rel_tol * magnitude) +
                            " on [0, " + format_double(omega_max_) + "]");
    }
    ++b.level;
    b.coarse = b.fine;
    b.fine = evaluate_block(worst, b.level + 1);
  }

  double sum = 0.0;
  for (const auto& b : blocks) sum += b.fine.value + (b.fine.value - b.coarse.value) / 15.0;
  return sum;
}

std::vector<double> DephasingRate::evaluate(std::span<const double> times, int threads) const {
  std::vector<double> out(times.size());
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || times.size() < 2) {
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = (*this)(times[i]);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < times.size(); i += workers) out[i] = (*this)(times[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

RateTable RateTable::build(const DephasingRate& rate, const TimeGrid& grid, int threads) {
  if (grid.t_start() < 0.0) {
    throw ParameterError("RateTable: the grid must start at t >= 0");
  }
  std::vector<double> times = grid.times();
  times.push_back(grid.t_start() + 0.5 * grid.dt());
  std::vector<double> values = rate.evaluate(times, threads);
  const double mid = values.back();
  values.pop_back();
  return RateTable{grid, std::move(values), mid};
}

RateTable RateTable::coarsened(int factor) const {
  if (factor == 1) return *this;
  if (factor < 1 || factor % 2 != 0 || grid.steps() % factor != 0) {
    throw ParameterError("RateTable::coarsened: factor must be 1 or an even divisor of the step count");
  }
  TimeGrid coarse(grid.t_start(), grid.t_end(), grid.steps() / factor);
  std::vector<double> v;
  v.reserve(coarse.samples());
  for (std::size_t k = 0; k < values.size(); k += static_cast<std::size_t>(factor)) v.push_back(values[k]);
  return RateTable{coarse, std::move(v), values[static_cast<std::size_t>(factor / 2)]};
}

namespace {

using State = std::array<Complex, 4>;  // column-stacked 2×2 ρ

State dephasing_rhs(double gamma, const State& y) {
  // σᶻρσᶻ − ρ removes twice the off-diagonal part and leaves the diagonal exactly.
  return {Complex{0.0, 0.0}, -gamma * y[1], -gamma * y[2], Complex{0.0, 0.0}};
}

State axpy(const State& y, double a, const State& f) {
  State r;
  for (std::size_t i = 0; i < 4; ++i) r[i] = y[i] + a * f[i];
  return r;
}

}  // namespace

TimeSeries evolve_dephasing(const RateTable& rates, const DensityMatrix& rho0) {
  if (rho0.dim() != 2) {
    throw ShapeError("evolve_dephasing: the initial state must be 2x2");
  }
  const TimeGrid& grid = rates.grid;
  if (rates.values.size() != grid.samples()) {
    throw ShapeError("evolve_dephasing: rate table does not match its grid");
  }
  const double dt = grid.dt();
  double max_gamma = std::abs(rates.first_midpoint);
  for (double g : rates.values) max_gamma = std::max(max_gamma, std::abs(g));

  TimeSeries series(grid.times());
  if (dt * max_gamma > 1.0) {
    throw NumericalStabilityError("evolve_dephasing: dt*max|gamma| = " +
                                  format_double(dt * max_gamma) + " exceeds 1; reduce dt");
  }
  if (auto w = grid.step_warning(max_gamma, 0.1, "evolve_dephasing")) series.add_warning(*w);

  const ComplexMatrix& m0 = rho0.matrix();
  State y{m0(0, 0), m0(1, 0), m0(0, 1), m0(1, 1)};
  const State initial = y;
  const std::size_t n = grid.samples();
  std::vector<Complex> rho_eg(n);
  std::vector<double> coh(n);

  auto record = [&](std::size_t k, const State& s) {
    for (std::size_t i : {std::size_t{0}, std::size_t{3}}) {
      if (std::abs(s[i] - initial[i]) > 1e-12) {
        throw NumericalStabilityError("evolve_dephasing: population drift at step " +
                                      std::to_string(k));
      }
    }
    const double herm = std::abs(s[1] - std::conj(s[2]));
    if (herm > 1e-8) {
      throw NumericalStabilityError("evolve_dephasing: Hermiticity lost at step " +
                                    std::to_string(k) + " (" + format_double(herm) + ")");
    }
    rho_eg[k] = s[2];  // ρ(0,1): |e⟩ is the first basis state
    coh[k] = std::abs(s[1]) + std::abs(s[2]);
  };

  record(0, y);
  State f_prev = dephasing_rhs(rates.values[0], y);
  if (n > 1) {
    const double gm = rates.first_midpoint;
    const State k1 = f_prev;
    const State k2 = dephasing_rhs(gm, axpy(y, 0.5 * dt, k1));
    const State k3 = dephasing_rhs(gm, axpy(y, 0.5 * dt, k2));
    const State k4 = dephasing_rhs(rates.values[1], axpy(y, dt, k3));
    for (std::size_t i = 0; i < 4; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    record(1, y);
  }
  State f_curr = n > 1 ? dephasing_rhs(rates.values[1], y) : f_prev;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    State predicted;
    for (std::size_t i = 0; i < 4; ++i) predicted[i] = y[i] + 0.5 * dt * (3.0 * f_curr[i] - f_prev[i]);
    const State f_pred = dephasing_rhs(rates.values[k + 1], predicted);
    for (std::size_t i = 0; i < 4; ++i) {
      y[i] += dt / 12.0 * (5.0 * f_pred[i] + 8.0 * f_curr[i] - f_prev[i]);
    }
    f_prev = f_curr;
    f_curr = dephasing_rhs(rates.values[k + 1], y);
    record(k + 1, y);
  }

  series.add_real("gamma", rates.values);
  series.add_complex("rho_eg", std::move(rho_eg));
  series.add_real("coherence", std::move(coh));
  series.add_real("nm_measure", nm_measure(rates.values, grid));
  return series;
}

double coherence(const ComplexMatrix& rho) {
  require_square(rho, "coherence");
  double c = 0.0;
  for (Eigen::Index j = 0; j < rho.cols(); ++j) {
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      if (i != j) c += std::abs(rho(i, j));
    }
  }
  return c;
}

std::vector<double> nm_measure(std::span<const double> gamma, const TimeGrid& grid) {
  if (gamma.size() != grid.samples()) {
    throw ShapeError("nm_measure: gamma has " + std::to_string(gamma.size()) +
                     " samples, the grid " + std::to_string(grid.samples()));
  }
  std::vector<double> out(gamma.size(), 0.0);
  auto negative_part = [](double g) { return 0.5 * (std::abs(g) - g); };
  for (std::size_t k = 1; k < gamma.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * grid.dt() * (negative_part(gamma[k - 1]) + negative_part(gamma[k]));
  }
  return out;
}

DensityMatrix equal_superposition() {
  ComplexMatrix rho = ComplexMatrix::Constant(2, 2, Complex{0.5, 0.0});
  return DensityMatrix(std::move(rho));
}

}  // namespace qdyn
