#include "qdyn/experiments.hpp"

#include "qdyn/closed.hpp"
#include "qdyn/dephasing.hpp"
#include "qdyn/error.hpp"
#include "qdyn/kinks.hpp"
#include "qdyn/markovian.hpp"
#include "qdyn/matrix_json.hpp"
#include "qdyn/models.hpp"
#include "qdyn/resources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdyn {

namespace {

constexpr std::int64_t kDimSaturation = std::int64_t{1} << 40;

std::int64_t saturating_pow(std::int64_t base, int exponent) {
  std::int64_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    if (r > kDimSaturation / base) return kDimSaturation;
    r *= base;
  }
  return r;
}

struct Dims {
  std::int64_t hilbert = 0;
  std::optional<std::int64_t> liouvillian;
};

Dims dims_of(const ExperimentParams& params) {
  struct Visitor {
    Dims operator()(const TwoSpinParams&) const { return {4, std::nullopt}; }
    Dims operator()(const IsingDqptParams& p) const { return {saturating_pow(2, p.model.spins), std::nullopt}; }
    Dims operator()(const CavityParams& p) const {
      return {saturating_pow(2 * (p.model.cutoff + 1), p.model.cavities), std::nullopt};
    }
    Dims operator()(const OpenIsingParams& p) const {
      const std::int64_t d = saturating_pow(2, static_cast<int>(p.gammas.size()));
      return {d, d * d};
    }
    Dims operator()(const TlsParams&) const { return {2, 4}; }
    Dims operator()(const DephasingParams&) const { return {2, std::nullopt}; }
  };
  return std::visit(Visitor{}, params);
}

// ---- closed-system runs -------------------------------------------------

struct ClosedRecorder {
  std::vector<NamedOperator> ops;
  std::vector<std::vector<double>> values;
  std::vector<double> energy;
  std::vector<double> norm;

  ClosedRecorder(std::vector<NamedOperator> o, std::size_t samples) : ops(std::move(o)) {
    values.assign(ops.size(), std::vector<double>(samples));
    energy.resize(samples);
    norm.resize(samples);
  }

  void record(std::size_t k, const ComplexMatrix& h, const ComplexVector& psi) {
    for (std::size_t i = 0; i < ops.size(); ++i) values[i][k] = psi.dot(ops[i].op * psi).real();
    energy[k] = psi.dot(h * psi).real();
    norm[k] = psi.norm();
  }

  void emit(TimeSeries& series, nlohmann::json& summary) {
    double norm_dev = 0.0;
    double energy_dev = 0.0;
    for (std::size_t k = 0; k < norm.size(); ++k) {
      norm_dev = std::max(norm_dev, std::abs(norm[k] - 1.0));
      energy_dev = std::max(energy_dev, std::abs(energy[k] - energy[0]));
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
      summary[ops[i].name + "_initial"] = values[i].front();
      summary[ops[i].name + "_final"] = values[i].back();
      series.add_real(ops[i].name, std::move(values[i]));
    }
    summary["max_norm_deviation"] = norm_dev;
    summary["max_energy_deviation"] = energy_dev;
    series.add_real("energy", std::move(energy));
    series.add_real("norm", std::move(norm));
  }
};

std::vector<NamedOperator> magnetizations(int spins) {
  const HilbertSpace space = HilbertSpace::spins(spins);
  return {{"Mx", magnetization_operator(space, Axis::X)},
          {"My", magnetization_operator(space, Axis::Y)},
          {"Mz", magnetization_operator(space, Axis::Z)}};
}

PointOutput run_two_spin(const TwoSpinParams& p, const TimeGrid& grid) {
  const ComplexMatrix h = two_spin_hamiltonian(p.coupling, p.field);
  const StateVector psi0 = StateVector::basis(4, p.initial == "down_down" ? 3 : 0);
  ClosedRecorder rec(magnetizations(2), grid.samples());
  PointOutput out;
  propagate(h, psi0, grid, [&](std::size_t k, double, const ComplexVector& psi) { rec.record(k, h, psi); },
            &out.warnings);
  out.series = TimeSeries(grid.times());
  rec.emit(out.series, out.summary);
  return out;
}

PointOutput run_ising(const IsingDqptParams& p, const TimeGrid& grid, const KinkOptions& kinks) {
  const IsingHamiltonian h = ising_hamiltonian(p.model);
  const auto pair = ising_ground_pair(p.model.spins, p.model.alpha);
  const StateVector& psi0 = p.initial == "right" ? pair.first : pair.second;
  auto ops = magnetizations(p.model.spins);
  ops.erase(ops.begin() + 1);  // My vanishes by symmetry
  ClosedRecorder rec(std::move(ops), grid.samples());
  std::vector<double> rate(grid.samples());
  PointOutput out;
  propagate(
      h.total, psi0, grid,
      [&](std::size_t k, double, const ComplexVector& psi) {
        rec.record(k, h.total, psi);
        rate[k] = ising_rate_function(pair, StateVector(psi), p.model.spins);
      },
      &out.warnings);

  const std::vector<double> times = grid.times();
  const std::vector<double> critical = detect_kinks(times, rate, kinks);
  out.summary["critical_times"] = critical;
  out.summary["kink_count"] = critical.size();
  out.summary["rate_function_initial"] = rate.front();
  out.summary["rate_function_min"] = *std::min_element(rate.begin(), rate.end());
  out.summary["rate_function_max"] = *std::max_element(rate.begin(), rate.end());
  out.summary["coupling_normalization"] =
      p.model.normalize ? 1.0 / ising_coupling(p.model, 1, 2) : 1.0;
  out.series = TimeSeries(times);
  rec.emit(out.series, out.summary);
  out.series.add_real("rate_function", std::move(rate));
  return out;
}

PointOutput run_cavity(const CavityParams& p, const ExperimentConfig& cfg, const KinkOptions& kinks) {
  const bool hopping_units = cfg.grid.units == "hopping";
  const double unit = hopping_units ? 1.0 / p.model.hopping : 1.0;
  const TimeGrid config_grid = cfg.grid.grid();
  const TimeGrid grid(config_grid.t_start() * unit, config_grid.t_end() * unit, config_grid.steps());
  const std::vector<double> times = config_grid.times();

  PointOutput out;
  out.series = TimeSeries(times);
  out.summary["detuning"] = p.model.detuning();
  out.summary["log10_detuning_over_g"] = p.log10_detuning_over_g;
  out.summary["time_unit"] = hopping_units ? "1/J" : "1";
  out.summary["window"] = grid.t_end() - grid.t_start();

  const StateVector psi0 = mott_initial_state(p.model);
  std::vector<RealVector> numbers;
  for (const auto& n : polariton_number_operators(p.model)) {
    if (max_abs(n - ComplexMatrix(n.diagonal().asDiagonal())) != 0.0) {
      throw ModelError("cavity: polariton number operators are expected to be diagonal");
    }
    numbers.push_back(n.diagonal().real());
  }

  for (const bool rwa : {true, false}) {
    if ((rwa && !p.run_jch) || (!rwa && !p.run_rh)) continue;
    const std::string tag = rwa ? "jch" : "rh";
    CavityArrayParams model = p.model;
    model.rwa = rwa;
    const ComplexMatrix h = cavity_hamiltonian(model, &out.warnings);
    std::vector<double> rate(grid.samples());
    std::vector<double> variance(grid.samples());
    std::vector<double> ret(grid.samples());
    std::vector<double> norm(grid.samples());
    std::vector<double> energy(grid.samples());
    const ComplexVector& a0 = psi0.amplitudes();
    propagate(
        h, psi0, grid,
        [&](std::size_t k, double, const ComplexVector& psi) {
          const double prob = std::norm(a0.dot(psi));
          ret[k] = prob;
          rate[k] = cavity_rate_function(prob, p.model.cavities);
          norm[k] = psi.norm();
          energy[k] = psi.dot(h * psi).real();
          const RealVector weights = psi.cwiseAbs2();
          double var = 0.0;
          for (const auto& n : numbers) {
            const double mean = weights.dot(n);
            var += weights.dot(n.cwiseProduct(n)) - mean * mean;
          }
          variance[k] = var;
        },
        &out.warnings);

    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(rate.begin(), rate.end()) - rate.begin());
    out.summary["order_parameter_" + tag] =
        order_parameter(std::span<const double>(variance), grid.t_end() - grid.t_start());
    out.summary["rate_peak_time_" + tag] = times[peak];
    out.summary["rate_peak_value_" + tag] = rate[peak];
    out.summary["critical_times_" + tag] = detect_kinks(times, rate, kinks);
    out.series.add_real("rate_function_" + tag, std::move(rate));
    out.series.add_real("return_probability_" + tag, std::move(ret));
    out.series.add_real("variance_" + tag, std::move(variance));
    out.series.add_real("norm_" + tag, std::move(norm));
    out.series.add_real("energy_" + tag, std::move(energy));
  }
  if (p.run_jch && p.run_rh) {
    out.summary["order_parameter_difference"] =
        std::abs(out.summary["order_parameter_jch"].get<double>() -
                 out.summary["order_parameter_rh"].get<double>());
  }
  return out;
}

// ---- Liouvillian runs ----------------------------------------------------

nlohmann::json eigenvalue_list(const LiouvillianSpectrum& spec) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& m : spec.modes) list.push_back({m.lambda.real(), m.lambda.imag()});
  return list;
}

void describe_spectrum(const LiouvillianSpectrum& spec, PointOutput& out) {
  out.summary["liouvillian_dim"] = spec.liouvillian.rows();
  out.summary["eigenvalues"] = eigenvalue_list(spec);
  out.summary["max_abs_eigenvalue"] = spec.max_abs_eigenvalue();
  out.summary["biorthogonality_residual"] = spec.biorthogonality_residual();
  out.summary["tol"] = spec.tol;
  out.extra_files.emplace_back("spectrum.json", spectrum_to_json(spec).dump(1) + "\n");
}

PointOutput run_open_ising(const OpenIsingParams& p, const TimeGrid& grid) {
  const ComplexMatrix h = two_spin_hamiltonian(p.coupling, p.field);
  const auto channels = dissipative_ising_channels(p.gammas);
  const LiouvillianSpectrum spec = decompose(build_liouvillian(h, channels), p.tol);
  const DensityMatrix rho0 = DensityMatrix::pure(StateVector::basis(4, p.initial == "down_down" ? 3 : 0));

  const auto ops = magnetizations(2);
  const ComplexMatrix& mz = ops[2].op;
  PointOutput out;
  out.series = evolve_spectral(spec, rho0, grid, ops);
  describe_spectrum(spec, out);

  const DensityMatrix ss = steady_state(spec, rho0, &out.warnings);
  const double mz_ss = (mz * ss.matrix()).trace().real();
  const EnvelopeMode env = envelope_mode(spec, rho0, &mz);
  std::vector<double> upper(grid.samples());
  std::vector<double> lower(grid.samples());
  for (std::size_t k = 0; k < grid.samples(); ++k) {
    const double width = env.bound * std::exp(env.lambda.real() * (grid.time(k) - grid.t_start()));
    upper[k] = mz_ss + width;
    lower[k] = mz_ss - width;
  }
  out.series.add_real("Mz_envelope_upper", std::move(upper));
  out.series.add_real("Mz_envelope_lower", std::move(lower));
  out.summary["envelope_eigenvalue"] = {env.lambda.real(), env.lambda.imag()};
  out.summary["envelope_bound"] = env.bound;
  out.summary["Mz_steady_state"] = mz_ss;
  out.summary["Mz_initial"] = out.series.real("Mz").front();
  out.summary["Mz_final"] = out.series.real("Mz").back();
  out.summary["steady_state"] = matrix_to_json(ss.matrix());
  for (const auto& w : out.series.warnings()) out.warnings.push_back(w);
  return out;
}

PointOutput run_tls(const TlsParams& p, const TimeGrid& grid) {
  const TwoLevelPhotonModel model = tls_photon_model(p.rabi, p.gamma0, p.photons);
  const LiouvillianSpectrum spec = decompose(build_liouvillian(model.hamiltonian, model.channels), p.tol);
  const DensityMatrix rho0 = DensityMatrix::pure(StateVector::basis(2, p.initial == "ground" ? 1 : 0));

  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(0, 0) = 1.0;
  const std::vector<NamedOperator> ops{{"p_e", excited}, {"sigma_plus", pauli(PauliKind::Raising)}};
  PointOutput out;
  out.series = evolve_spectral(spec, rho0, grid, ops);
  describe_spectrum(spec, out);

  const DensityMatrix ss = steady_state(spec, rho0, &out.warnings);
  out.summary["rho_ee_steady_state"] = ss.matrix()(0, 0).real();
  out.summary["rho_eg_steady_state"] = {ss.matrix()(0, 1).real(), ss.matrix()(0, 1).imag()};
  out.summary["steady_state"] = matrix_to_json(ss.matrix());

  if (p.photons == 0.0 && p.initial == "ground" && p.rabi > 0.0 && p.gamma0 > 0.0) {
    const TimeSeries exact = tls_exact_benchmark(p.rabi, p.gamma0, grid);
    const auto& pe = out.series.real("p_e");
    const auto& sp = out.series.complex("sigma_plus");
    double err_pe = 0.0;
    double err_sp = 0.0;
    for (std::size_t k = 0; k < grid.samples(); ++k) {
      err_pe = std::max(err_pe, std::abs(pe[k] - exact.real("p_e")[k]));
      err_sp = std::max(err_sp, std::abs(sp[k].imag() - exact.complex("sigma_plus")[k].imag()));
    }
    out.series.add_real("p_e_exact", exact.real("p_e"));
    out.series.add_complex("sigma_plus_exact", exact.complex("sigma_plus"));
    out.summary["max_error_p_e"] = err_pe;
    out.summary["max_error_im_sigma_plus"] = err_sp;
  }
  for (const auto& w : out.series.warnings()) out.warnings.push_back(w);
  return out;
}

// ---- non-Markovian run ---------------------------------------------------

PointOutput run_dephasing(const DephasingParams& p, const TimeGrid& grid, int threads) {
  const DephasingRate rate(p.bath);
  const RateTable table = RateTable::build(rate, grid, threads);
  PointOutput out;
  out.series = evolve_dephasing(table, equal_superposition());
  for (const auto& w : out.series.warnings()) out.warnings.push_back(w);

  const auto& gamma = out.series.real("gamma");
  std::vector<double> crossings;
  for (std::size_t k = 1; k < gamma.size(); ++k) {
    if (gamma[k - 1] > 0.0 && gamma[k] <= 0.0) {
      const double f = gamma[k - 1] / (gamma[k - 1] - gamma[k]);
      crossings.push_back(grid.time(k - 1) + f * grid.dt());
    }
  }
  out.summary["spectral_density"] = sdf_name(p.bath.sdf);
  out.summary["omega_max"] = rate.omega_max();
  out.summary["gamma_downward_zero_crossings"] = crossings;
  out.summary["gamma_max_abs"] = std::abs(*std::max_element(
      gamma.begin(), gamma.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
  out.summary["coherence_final"] = out.series.real("coherence").back();
  out.summary["nm_measure_final"] = out.series.real("nm_measure").back();
  return out;
}

}  // namespace

nlohmann::json ResourceEstimate::to_json() const {
  nlohmann::json j{{"hilbert_dim", hilbert_dim},
                   {"memory_gb_real", real_gb},
                   {"memory_gb_real_rounded_up", std::ceil(real_gb * 10.0 - 1e-9) / 10.0},
                   {"memory_gb_complex", complex_gb},
                   {"budget_gb", budget_gb},
                   {"within_budget", within_budget}};
  if (liouvillian_dim) {
    j["liouvillian_dim"] = *liouvillian_dim;
    j["liouvillian_memory_gb_complex"] = liouvillian_complex_gb;
  } else {
    j["liouvillian_dim"] = nullptr;
  }
  return j;
}

ResourceEstimate estimate_resources(const ExperimentConfig& config) {
  ResourceEstimate e;
  for (const auto& point : config.points) {
    const Dims d = dims_of(point.typed);
    e.hilbert_dim = std::max(e.hilbert_dim, d.hilbert);
    if (d.liouvillian) e.liouvillian_dim = std::max(e.liouvillian_dim.value_or(0), *d.liouvillian);
  }
  const MemoryEstimate m = memory_estimate(e.hilbert_dim);
  e.real_gb = m.real_double_gb;
  e.complex_gb = m.complex_bytes * 1e-9;
  e.budget_gb = memory_budget_bytes() * 1e-9;
  double largest = m.complex_bytes;
  auto largest_dim = static_cast<std::size_t>(e.hilbert_dim);
  if (e.liouvillian_dim) {
    const MemoryEstimate l = memory_estimate(*e.liouvillian_dim);
    e.liouvillian_complex_gb = l.complex_bytes * 1e-9;
    largest = std::max(largest, l.complex_bytes);
    largest_dim = std::max(largest_dim, static_cast<std::size_t>(*e.liouvillian_dim));
  }
  e.within_budget = largest <= memory_budget_bytes() && largest_dim <= max_dimension();
  return e;
}

void require_resources(const ResourceEstimate& e) {
  if (e.within_budget) return;
  std::string msg = "resource refusal: Hilbert dimension " + std::to_string(e.hilbert_dim) +
                    " needs " + format_double(e.real_gb) + " GB by dim^2*8e-9 and " +
                    format_double(e.complex_gb) + " GB as complex doubles";
  if (e.liouvillian_dim) {
    msg += "; Liouvillian dimension " + std::to_string(*e.liouvillian_dim) + " needs " +
           format_double(e.liouvillian_complex_gb) + " GB";
  }
  msg += "; budget " + format_double(e.budget_gb) + " GB, dimension cap " +
         std::to_string(max_dimension());
  throw ResourceError(msg);
}

PointOutput run_point(const ExperimentConfig& config, const RunPoint& point, int threads) {
  const TimeGrid grid = config.grid.grid();
  struct Visitor {
    const ExperimentConfig& cfg;
    const TimeGrid& grid;
    int threads;
    PointOutput operator()(const TwoSpinParams& p) const { return run_two_spin(p, grid); }
    PointOutput operator()(const IsingDqptParams& p) const { return run_ising(p, grid, cfg.kinks); }
    PointOutput operator()(const CavityParams& p) const { return run_cavity(p, cfg, cfg.kinks); }
    PointOutput operator()(const OpenIsingParams& p) const { return run_open_ising(p, grid); }
    PointOutput operator()(const TlsParams& p) const { return run_tls(p, grid); }
    PointOutput operator()(const DephasingParams& p) const { return run_dephasing(p, grid, threads); }
  };
  PointOutput out = std::visit(Visitor{config, grid, threads}, point.typed);
  out.summary["experiment"] = std::string(experiment_name(config.experiment));
  if (point.sweep_value) out.summary["sweep_value"] = *point.sweep_value;
  std::sort(out.warnings.begin(), out.warnings.end());
  out.warnings.erase(std::unique(out.warnings.begin(), out.warnings.end()), out.warnings.end());
  return out;
}

}  // namespace qdyn
