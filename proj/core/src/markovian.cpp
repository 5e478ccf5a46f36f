#include "qdyn/markovian.hpp"

#include "qdyn/error.hpp"
#include "qdyn/matrix_json.hpp"

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

namespace qdyn {

namespace {

constexpr double kStateTol = 1e-8;

double min_hermitian_eigenvalue(const ComplexMatrix& rho) {
  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_square(matrix_, "DensityMatrix");
  require_valid(matrix_, "DensityMatrix");
  const double herm = hermiticity_deviation(matrix_);
  if (herm > kStateTol) {
    throw SymmetryError("DensityMatrix: not Hermitian (deviation " + format_double(herm) + ")");
  }
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > kStateTol) {
    throw ParameterError("DensityMatrix: trace " + format_double(trace) + " differs from 1");
  }
  const double min_eig = min_hermitian_eigenvalue(matrix_);
  if (min_eig < -kStateTol) {
    throw ParameterError("DensityMatrix: negative eigenvalue " + format_double(min_eig));
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const ComplexVector& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

ComplexMatrix build_liouvillian(const ComplexMatrix& hamiltonian,
                                const std::vector<LindbladChannel>& channels) {
  require_square(hamiltonian, "build_liouvillian");
  const Eigen::Index d = hamiltonian.rows();
  const ComplexMatrix id = identity(d);
  ComplexMatrix l = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& ch : channels) {
    if (ch.op.rows() != d || ch.op.cols() != d) {
      throw ShapeError("build_liouvillian: channel operator is " + std::to_string(ch.op.rows()) +
                       "x" + std::to_string(ch.op.cols()) + ", system dimension is " +
                       std::to_string(d));
    }
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
      throw ParameterError("build_liouvillian: channel rates must be finite and non-negative");
    }
    if (ch.rate == 0.0) continue;
    const ComplexMatrix ldl = ch.op.adjoint() * ch.op;
    l += ch.rate * (kron(ch.op.conjugate(), ch.op) - 0.5 * kron(id, ldl) -
                    0.5 * kron(ldl.transpose(), id));
  }
  return l;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& hamiltonian,
                           const std::vector<LindbladChannel>& channels, const ComplexMatrix& rho) {
  ComplexMatrix out = -kI * commutator(hamiltonian, rho);
  for (const auto& ch : channels) {
    const ComplexMatrix ldl = ch.op.adjoint() * ch.op;
    out += ch.rate * (ch.op * rho * ch.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

double LiouvillianSpectrum::max_abs_eigenvalue() const noexcept {
  double m = 0.0;
  for (const auto& mode : modes) m = std::max(m, std::abs(mode.lambda));
  return m;
}

double LiouvillianSpectrum::biorthogonality_residual() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const Complex overlap = (modes[j].left * modes[k].right).trace();
      worst = std::max(worst, std::abs(overlap - (j == k ? 1.0 : 0.0)));
    }
  }
  return worst;
}

namespace {

// Single-linkage grouping of eigenvalues closer than tol.
std::vector<std::vector<std::size_t>> cluster(const std::vector<Complex>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) < tol) parent[root(i)] = root(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return groups;
}

Complex mean_of(const std::vector<Complex>& values, const std::vector<std::size_t>& idx) {
  Complex s{0.0, 0.0};
  for (auto i : idx) s += values[i];
  return s / static_cast<double>(idx.size());
}

// Orthonormal basis for the m smallest right singular vectors of a.
ComplexMatrix near_kernel(const ComplexMatrix& a, Eigen::Index m, double* gap_ratio) {
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index n = s.size();
  const double inside = s(n - m);
  const double outside = n > m ? s(n - m - 1) : std::numeric_limits<double>::infinity();
  *gap_ratio = outside > 0.0 ? inside / outside : 1.0;
  return svd.matrixV().rightCols(m);
}

struct RawMode {
  Complex lambda;
  ComplexVector right;
  ComplexVector left;  // biorthonormal: left.dot(right) == 1
};

void resolve_cluster(const ComplexMatrix& liou, const std::vector<Complex>& right_values,
                     const std::vector<std::size_t>& members, double tol,
                     std::vector<RawMode>& out) {
  const auto m = static_cast<Eigen::Index>(members.size());
  const Complex centre = mean_of(right_values, members);
  const Eigen::Index n = liou.rows();
  const ComplexMatrix shifted = liou - centre * ComplexMatrix::Identity(n, n);

  double gap_r = 0.0;
  double gap_l = 0.0;
  const ComplexMatrix v = near_kernel(shifted, m, &gap_r);
  const ComplexMatrix u0 = near_kernel(shifted.adjoint(), m, &gap_l);
  if (gap_r > 0.1 || gap_l > 0.1) {
    throw DecompositionError("decompose: eigenvalue cluster near " + format_double(centre.real()) +
                             format_double(centre.imag()) + "i of size " + std::to_string(m) +
                             " is not separated from the rest of the spectrum (tol=" +
                             format_double(tol) + ")");
  }
  const ComplexMatrix s = u0.adjoint() * v;
  Eigen::JacobiSVD<ComplexMatrix> s_svd(s);
  const double rcond = s_svd.singularValues().minCoeff() / s_svd.singularValues().maxCoeff();
  if (!(rcond > 1e-10)) {
    throw DecompositionError("decompose: left and right subspaces of the cluster near " +
                             format_double(centre.real()) + " are not biorthogonalizable "
                             "(defective generator?)");
  }
  // After this step u.adjoint() * v == I.
  const ComplexMatrix u = u0 * s.inverse().adjoint();
  const ComplexMatrix reduced = u.adjoint() * liou * v;

  ComplexMatrix w = ComplexMatrix::Identity(m, m);
  std::vector<Complex> lambdas(static_cast<std::size_t>(m));
  const Complex avg = reduced.trace() / static_cast<double>(m);
  const double spread = max_abs(reduced - avg * ComplexMatrix::Identity(m, m));
  if (spread <= 1e-12 * std::max(1.0, one_norm(liou))) {
    for (Eigen::Index k = 0; k < m; ++k) lambdas[static_cast<std::size_t>(k)] = reduced(k, k);
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(reduced);
    if (es.info() != Eigen::Success) {
      throw DecompositionError("decompose: reduced eigenproblem of a cluster failed");
    }
    w = es.eigenvectors();
    Eigen::JacobiSVD<ComplexMatrix> w_svd(w);
    if (!(w_svd.singularValues().minCoeff() > 1e-10 * w_svd.singularValues().maxCoeff())) {
      throw DecompositionError("decompose: cluster near " + format_double(centre.real()) +
                               " is defective (Jordan block)");
    }
    for (Eigen::Index k = 0; k < m; ++k) lambdas[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
  }
  const ComplexMatrix rights = v * w;
  const ComplexMatrix lefts = u * w.inverse().adjoint();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double scale = rights.col(k).norm();
    out.push_back({lambdas[static_cast<std::size_t>(k)], rights.col(k) / scale,
                   lefts.col(k) * scale});
  }
}

}  // namespace

LiouvillianSpectrum decompose(const ComplexMatrix& liouvillian, double tol) {
  require_square(liouvillian, "decompose");
  require_valid(liouvillian, "decompose");
  if (!(tol > 0.0)) throw ParameterError("decompose: tol must be positive");
  const Eigen::Index n = liouvillian.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) {
    throw ShapeError("decompose: dimension " + std::to_string(n) + " is not a perfect square");
  }

  const std::vector<EigenPair> right = eig_general(liouvillian);
  const std::vector<EigenPair> left = eig_general(liouvillian.adjoint());
  std::vector<Complex> rv;
  std::vector<Complex> lv;
  for (const auto& p : right) rv.push_back(p.value);
  for (const auto& p : left) lv.push_back(std::conj(p.value));

  const auto right_groups = cluster(rv, tol);
  const auto left_groups = cluster(lv, tol);
  std::vector<bool> used(left_groups.size(), false);

  std::vector<RawMode> raw;
  raw.reserve(static_cast<std::size_t>(n));
  for (const auto& group : right_groups) {
    const Complex centre = mean_of(rv, group);
    std::size_t best = left_groups.size();
    double best_dist = tol;
    for (std::size_t j = 0; j < left_groups.size(); ++j) {
      if (used[j] || left_groups[j].size() != group.size()) continue;
      const double dist = std::abs(mean_of(lv, left_groups[j]) - centre);
      if (dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best == left_groups.size()) {
      throw DecompositionError("decompose: no left eigenvalue matches " +
                               format_double(centre.real()) + (centre.imag() < 0 ? "" : "+") +
                               format_double(centre.imag()) + "i (multiplicity " +
                               std::to_string(group.size()) + ") within tol=" + format_double(tol));
    }
    used[best] = true;
    if (group.size() == 1) {
      const ComplexVector& v = right[group.front()].vector;
      const ComplexVector& u = left[left_groups[best].front()].vector;
      const Complex c = u.dot(v);
      if (std::abs(c) < 1e-12) {
        throw DecompositionError("decompose: left/right pair for " +
                                 format_double(centre.real()) + " is orthogonal, |c|=" +
                                 format_double(std::abs(c)));
      }
      const Complex root = std::sqrt(c);
      // Tr(L R) = uᴴv; dividing both sides by √c makes it one.
      raw.push_back({rv[group.front()], v / root, u / std::conj(root)});
    } else {
      resolve_cluster(liouvillian, rv, group, tol, raw);
    }
  }

  // Descending Re λ; modes whose real parts chain within tol are ordered by Im λ.
  std::sort(raw.begin(), raw.end(),
            [](const RawMode& a, const RawMode& b) { return a.lambda.real() > b.lambda.real(); });
  for (std::size_t start = 0; start < raw.size();) {
    std::size_t end = start + 1;
    while (end < raw.size() && raw[end - 1].lambda.real() - raw[end].lambda.real() < tol) ++end;
    std::stable_sort(raw.begin() + static_cast<long>(start), raw.begin() + static_cast<long>(end),
                     [](const RawMode& a, const RawMode& b) { return a.lambda.imag() > b.lambda.imag(); });
    start = end;
  }

  LiouvillianSpectrum spec;
  spec.tol = tol;
  spec.liouvillian = liouvillian;
  const double scale = std::max(1.0, one_norm(liouvillian));
  for (const auto& r : raw) {
    const double residual = (liouvillian * r.right - r.lambda * r.right).norm() / r.right.norm();
    if (residual > 1e-6 * scale) {
      throw DecompositionError("decompose: eigenmatrix residual " + format_double(residual) +
                               " for lambda=" + format_double(r.lambda.real()));
    }
    spec.modes.push_back({r.lambda, devectorize(r.right, d), devectorize(r.left, d).adjoint()});
  }

  const double bio = spec.biorthogonality_residual();
  if (bio > 1e-6) {
    throw DecompositionError("decompose: biorthonormality residual " + format_double(bio) +
                             " exceeds 1e-6");
  }
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& m : spec.modes) smallest = std::min(smallest, std::abs(m.lambda));
  if (smallest > tol) {
    throw DecompositionError("decompose: no steady state, smallest |lambda| " + format_double(smallest) +
                             " exceeds tol=" + format_double(tol));
  }
  return spec;
}

std::vector<Complex> spectral_weights(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0) {
  if (rho0.dim() != spectrum.system_dim()) {
    throw ShapeError("spectral_weights: initial state dimension does not match the spectrum");
  }
  std::vector<Complex> c;
  c.reserve(spectrum.modes.size());
  for (const auto& m : spectrum.modes) c.push_back((rho0.matrix() * m.left).trace());
  return c;
}

ComplexMatrix spectral_state(const LiouvillianSpectrum& spectrum, const std::vector<Complex>& weights,
                             double t) {
  if (weights.size() != spectrum.modes.size()) {
    throw ShapeError("spectral_state: weight count does not match the spectrum");
  }
  const Eigen::Index d = spectrum.system_dim();
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    rho += weights[k] * std::exp(spectrum.modes[k].lambda * t) * spectrum.modes[k].right;
  }
  return rho;
}

TimeSeries evolve_spectral(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0,
                           const TimeGrid& grid, const std::vector<NamedOperator>& observables) {
  const std::vector<Complex> c = spectral_weights(spectrum, rho0);
  const Eigen::Index d = spectrum.system_dim();
  const auto kmodes = static_cast<Eigen::Index>(spectrum.modes.size());

  ComplexMatrix basis(d * d, kmodes);
  ComplexVector weights(kmodes);
  ComplexVector rates(kmodes);
  for (Eigen::Index k = 0; k < kmodes; ++k) {
    const auto& mode = spectrum.modes[static_cast<std::size_t>(k)];
    basis.col(k) = vectorize(mode.right);
    weights(k) = c[static_cast<std::size_t>(k)];
    rates(k) = mode.lambda;
  }

  struct Probe {
    ComplexVector row;  // vec(Oᵀ), so that Tr(Oρ) = Σ row ⊙ vec(ρ)
    bool hermitian;
    std::vector<double> re;
    std::vector<Complex> cx;
  };
  std::vector<Probe> probes;
  for (const auto& o : observables) {
    if (o.op.rows() != d || o.op.cols() != d) {
      throw ShapeError("evolve_spectral: observable '" + o.name + "' has the wrong dimension");
    }
    Probe p{vectorize(o.op.transpose()),
            hermiticity_deviation(o.op) <= 1e-12 * std::max(1.0, max_abs(o.op)), {}, {}};
    (p.hermitian ? (void)p.re.resize(grid.samples()) : p.cx.resize(grid.samples()));
    probes.push_back(std::move(p));
  }

  TimeSeries series(grid.times());
  if (auto w = grid.step_warning(spectrum.max_abs_eigenvalue(), 0.1, "evolve_spectral")) {
    series.add_warning(*w);
  }

  std::vector<double> trace(grid.samples());
  std::vector<double> herm(grid.samples());
  std::vector<double> min_eig(grid.samples());
  double worst_herm = 0.0;
  double worst_eig = 0.0;
  for (std::size_t n = 0; n < grid.samples(); ++n) {
    const double t = grid.time(n);
    const ComplexVector coeff = weights.cwiseProduct((rates * t).array().exp().matrix());
    const ComplexVector vec_rho = basis * coeff;
    const ComplexMatrix rho = devectorize(vec_rho, d);
    const Complex tr = rho.trace();
    trace[n] = tr.real();
    herm[n] = hermiticity_deviation(rho);
    min_eig[n] = min_hermitian_eigenvalue(rho);
    const double drift = std::abs(tr - 1.0);
    if (drift > 1e-6) {
      throw DecompositionError("evolve_spectral: trace drifted by " + format_double(drift) +
                               " at t=" + format_double(t) + "; the spectral decomposition is "
                               "inaccurate (try a different tol)");
    }
    worst_herm = std::max(worst_herm, herm[n]);
    worst_eig = std::min(worst_eig, min_eig[n]);
    for (auto& p : probes) {
      const Complex v = (p.row.array() * vec_rho.array()).sum();
      if (p.hermitian) {
        p.re[n] = v.real();
      } else {
        p.cx[n] = v;
      }
    }
  }

  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (probes[i].hermitian) {
      series.add_real(observables[i].name, std::move(probes[i].re));
    } else {
      series.add_complex(observables[i].name, std::move(probes[i].cx));
    }
  }
  series.add_real("trace", std::move(trace));
  series.add_real("hermiticity_deviation", std::move(herm));
  series.add_real("min_eigenvalue", std::move(min_eig));
  if (worst_herm > kStateTol) {
    series.add_warning("evolve_spectral: Hermiticity deviation reached " + format_double(worst_herm));
  }
  if (worst_eig < -kStateTol) {
    series.add_warning("evolve_spectral: minimum eigenvalue reached " + format_double(worst_eig));
  }
  return series;
}

DensityMatrix steady_state(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0,
                           std::vector<std::string>* log) {
  std::size_t zero_modes = 0;
  for (const auto& m : spectrum.modes) {
    if (std::abs(m.lambda) < spectrum.tol) ++zero_modes;
  }
  if (zero_modes != 1) {
    throw DecompositionError("steady_state: the lambda=0 eigenspace has multiplicity " +
                             std::to_string(zero_modes) + "; a unique steady state is required");
  }
  const Complex c1 = (rho0.matrix() * spectrum.modes.front().left).trace();
  ComplexMatrix rho = c1 * spectrum.modes.front().right;
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14) {
    throw DecompositionError("steady_state: c1*R1 has vanishing trace");
  }
  rho /= tr;
  const double herm = hermiticity_deviation(rho);
  rho = 0.5 * (rho + rho.adjoint());
  if (log != nullptr && (std::abs(tr - 1.0) > 1e-12 || herm > 1e-12)) {
    log->push_back("steady_state: rescaled trace " + format_double(tr.real()) +
                   " to 1 and removed anti-Hermitian part " + format_double(herm));
  }
  const double residual = (spectrum.liouvillian * vectorize(rho)).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw NumericalStabilityError("steady_state: residual |L rho_ss| = " + format_double(residual));
  }
  return DensityMatrix(std::move(rho));
}

EnvelopeMode envelope_mode(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0,
                           const ComplexMatrix* observable) {
  const std::vector<Complex> c = spectral_weights(spectrum, rho0);
  EnvelopeMode best;
  bool found = false;
  for (std::size_t k = 0; k < spectrum.modes.size(); ++k) {
    const auto& mode = spectrum.modes[k];
    if (mode.lambda.real() >= -spectrum.tol) continue;
    const double w = observable != nullptr ? std::abs(c[k] * (*observable * mode.right).trace())
                                           : std::abs(c[k]) * mode.right.norm();
    if (w <= 1e-10) continue;
    best.bound += w;
    if (!found || mode.lambda.real() > best.lambda.real()) {
      best.index = k;
      best.lambda = mode.lambda;
      found = true;
    }
  }
  if (!found) {
    throw DecompositionError("envelope_mode: no decaying mode contributes for this initial state");
  }
  return best;
}

TimeSeries tls_exact_benchmark(double rabi, double gamma0, const TimeGrid& grid) {
  if (!(rabi > 0.0) || !(gamma0 > 0.0)) {
    throw ParameterError("tls_exact_benchmark: Omega and gamma0 must be positive");
  }
  const double denom = gamma0 * gamma0 + 2.0 * rabi * rabi;
  const double pe_ss = rabi * rabi / denom;
  const double coh_ss = rabi * gamma0 / denom;
  // μ turns imaginary for Ω < γ₀/4; cos μt and sin(μt)/μ stay real.
  const Complex mu = std::sqrt(Complex{rabi * rabi - gamma0 * gamma0 / 16.0, 0.0});
  std::vector<double> pe(grid.samples());
  std::vector<Complex> sp(grid.samples());
  for (std::size_t n = 0; n < grid.samples(); ++n) {
    const double t = grid.time(n);
    const double cos_mt = std::cos(mu * t).real();
    const double sinc = std::abs(mu) > 0.0 ? (std::sin(mu * t) / mu).real() : t;
    const double decay = std::exp(-0.75 * gamma0 * t);
    pe[n] = pe_ss * (1.0 - decay * (cos_mt + 0.75 * gamma0 * sinc));
    const double bracket =
        1.0 - decay * (cos_mt + (0.25 * gamma0 - rabi * rabi / gamma0) * sinc);
    sp[n] = Complex{0.0, -coh_ss * bracket};
  }
  TimeSeries series(grid.times());
  series.add_real("p_e", std::move(pe));
  series.add_complex("sigma_plus", std::move(sp));
  return series;
}

nlohmann::json spectrum_to_json(const LiouvillianSpectrum& spectrum) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : spectrum.modes) {
    out.push_back({{"lambda_re", m.lambda.real()},
                   {"lambda_im", m.lambda.imag()},
                   {"R", matrix_to_json(m.right)},
                   {"L", matrix_to_json(m.left)}});
  }
  return out;
}

}  // namespace qdyn
