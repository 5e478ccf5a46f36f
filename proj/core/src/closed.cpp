#include "qdyn/closed.hpp"

#include "qdyn/error.hpp"
#include "qdyn/models.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <optional>
#include <string>

namespace qdyn {

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) {
    throw ShapeError("StateVector: empty amplitude vector");
  }
  if (!amplitudes_.allFinite()) {
    throw ParameterError("StateVector: non-finite amplitude");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw ParameterError("StateVector: norm " + format_double(norm) + " is not 1 within 1e-8");
  }
}

StateVector StateVector::normalized(ComplexVector v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ParameterError("StateVector::normalized: vector has zero or non-finite norm");
  }
  return StateVector(v / norm);
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) {
    throw ParameterError("StateVector::basis: index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::product(const std::vector<ComplexVector>& locals) {
  if (locals.empty()) {
    throw ParameterError("StateVector::product: no local states");
  }
  ComplexMatrix acc = locals.front();
  for (std::size_t i = 1; i < locals.size(); ++i) {
    acc = kron(acc, locals[i]);
  }
  return StateVector(acc.col(0));
}

Complex StateVector::overlap(const StateVector& other) const {
  if (other.dim() != dim()) {
    throw ShapeError("StateVector::overlap: dimension mismatch");
  }
  return amplitudes_.dot(other.amplitudes_);
}

Complex StateVector::expectation(const ComplexMatrix& op) const {
  if (op.rows() != dim() || op.cols() != dim()) {
    throw ShapeError("StateVector::expectation: operator dimension mismatch");
  }
  return amplitudes_.dot(op * amplitudes_);
}

namespace {

// Diagonal observables (number operators, σᶻ sums) skip the matrix-vector product.
struct PreparedObservable {
  std::string name;
  ComplexMatrix op;
  std::optional<RealVector> diagonal;
  bool hermitian = false;
  std::vector<double> real_values;
  std::vector<Complex> complex_values;

  explicit PreparedObservable(const NamedOperator& o) : name(o.name), op(o.op) {
    hermitian = hermiticity_deviation(op) <= 1e-12 * std::max(1.0, max_abs(op));
    const ComplexMatrix off = op - ComplexMatrix(op.diagonal().asDiagonal());
    if (hermitian && max_abs(off) == 0.0) {
      diagonal = op.diagonal().real();
    }
  }

  Complex evaluate(const ComplexVector& psi) const {
    if (diagonal) {
      return psi.cwiseAbs2().dot(*diagonal);
    }
    return psi.dot(op * psi);
  }
};

}  // namespace

void propagate(const ComplexMatrix& hamiltonian, const StateVector& psi0, const TimeGrid& grid,
               const StepObserver& observer, std::vector<std::string>* warnings) {
  require_square(hamiltonian, "propagate");
  if (hamiltonian.rows() != psi0.dim()) {
    throw ShapeError("propagate: Hamiltonian is " + std::to_string(hamiltonian.rows()) +
                     "-dimensional but the state has " + std::to_string(psi0.dim()) + " entries");
  }
  const double herm = hermiticity_deviation(hamiltonian);
  if (herm > 1e-10 * std::max(1.0, max_abs(hamiltonian))) {
    throw SymmetryError("propagate: Hamiltonian is not Hermitian (deviation " +
                        format_double(herm) + ")");
  }
  if (warnings != nullptr) {
    if (auto w = grid.step_warning(one_norm(hamiltonian), 0.1, "propagate")) {
      warnings->push_back(*w);
    }
  }

  const double dt = grid.dt();
  const ComplexMatrix propagator = expm(hamiltonian, Complex{0.0, -dt});
  ComplexVector psi = psi0.amplitudes();
  ComplexVector next(psi.size());
  observer(0, grid.time(0), psi);
  for (std::size_t k = 1; k < grid.samples(); ++k) {
    next.noalias() = propagator * psi;
    psi.swap(next);
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > 1e-6) {
      throw NumericalStabilityError("propagate: norm drifted by " + format_double(drift) +
                                    " at step " + std::to_string(k) +
                                    "; reduce dt=" + format_double(dt));
    }
    observer(k, grid.time(k), psi);
  }
}

TimeSeries propagate(const ComplexMatrix& hamiltonian, const StateVector& psi0,
                     const TimeGrid& grid, const std::vector<NamedOperator>& observables) {
  std::vector<PreparedObservable> prepared;
  prepared.reserve(observables.size());
  for (const auto& o : observables) {
    if (o.op.rows() != psi0.dim() || o.op.cols() != psi0.dim()) {
      throw ShapeError("propagate: observable '" + o.name + "' has the wrong dimension");
    }
    prepared.emplace_back(o);
    auto& p = prepared.back();
    if (p.hermitian) {
      p.real_values.resize(grid.samples());
    } else {
      p.complex_values.resize(grid.samples());
    }
  }

  std::vector<std::string> warnings;
  propagate(
      hamiltonian, psi0, grid,
      [&](std::size_t k, double, const ComplexVector& psi) {
        for (auto& p : prepared) {
          const Complex v = p.evaluate(psi);
          if (p.hermitian) {
            p.real_values[k] = v.real();
          } else {
            p.complex_values[k] = v;
          }
        }
      },
      &warnings);

  TimeSeries series(grid.times());
  for (auto& p : prepared) {
    if (p.hermitian) {
      series.add_real(p.name, std::move(p.real_values));
    } else {
      series.add_complex(p.name, std::move(p.complex_values));
    }
  }
  for (auto& w : warnings) series.add_warning(std::move(w));
  return series;
}

ComplexMatrix magnetization_operator(const HilbertSpace& space, Axis axis) {
  if (!space.all_spins()) {
    throw ParameterError("magnetization_operator: every site must be a spin-1/2");
  }
  const PauliKind kind = axis == Axis::X ? PauliKind::X : axis == Axis::Y ? PauliKind::Y : PauliKind::Z;
  const ComplexMatrix local = pauli(kind);
  const auto n = static_cast<int>(space.site_count());
  ComplexMatrix m = ComplexMatrix::Zero(space.total_dim(), space.total_dim());
  for (int i = 1; i <= n; ++i) {
    m += embed(space, i, local);
  }
  return m / static_cast<double>(n);
}

namespace {

double capped_rate(double probability, double log_base_factor, int count) {
  if (probability <= 0.0) {
    return kRateFunctionCap;
  }
  const double value = -std::log(probability) / log_base_factor / count;
  // Probabilities can exceed 1 by rounding; Λ is non-negative by definition.
  return std::min(std::max(value, 0.0), kRateFunctionCap);
}

}  // namespace

double ising_rate_function(const std::pair<StateVector, StateVector>& ground_pair,
                           const StateVector& psi_t, int spins) {
  if (spins < 1) throw ParameterError("ising_rate_function: spins must be positive");
  const double p_right = std::norm(ground_pair.first.overlap(psi_t));
  const double p_left = std::norm(ground_pair.second.overlap(psi_t));
  return std::min(capped_rate(p_right, 1.0, spins), capped_rate(p_left, 1.0, spins));
}

double cavity_rate_function(const StateVector& psi0, const StateVector& psi_t, int cavities) {
  if (cavities < 1) throw ParameterError("cavity_rate_function: cavities must be positive");
  return cavity_rate_function(std::norm(psi0.overlap(psi_t)), cavities);
}

double cavity_rate_function(double return_probability, int cavities) {
  if (cavities < 1) throw ParameterError("cavity_rate_function: cavities must be positive");
  return capped_rate(return_probability, std::log(2.0), cavities);
}

std::pair<StateVector, StateVector> ising_ground_pair(int spins, double alpha) {
  if (spins < 1) throw ParameterError("ising_ground_pair: spins must be positive");
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector right(2);
  right << s, s;
  ComplexVector left(2);
  left << s, -s;
  auto pair = std::make_pair(
      StateVector::product(std::vector<ComplexVector>(static_cast<std::size_t>(spins), right)),
      StateVector::product(std::vector<ComplexVector>(static_cast<std::size_t>(spins), left)));

  if (spins >= 2 && spins <= 8) {
    IsingParams p;
    p.spins = spins;
    p.alpha = alpha;
    p.field = 0.0;
    const ComplexMatrix h1 = ising_hamiltonian(p).coupling;
    const HermitianEigen eig = eig_hermitian(h1);
    const double e0 = eig.values(0);
    const double scale = std::max(1.0, std::abs(e0));
    Eigen::Index degeneracy = 0;
    while (degeneracy < eig.values.size() &&
           std::abs(eig.values(degeneracy) - e0) <= 1e-9 * scale) {
      ++degeneracy;
    }
    if (degeneracy != 2) {
      throw ModelError("ising_ground_pair: ground space has dimension " +
                       std::to_string(degeneracy) + ", expected 2");
    }
    const ComplexMatrix basis = eig.vectors.leftCols(2);
    for (const StateVector* st : {&pair.first, &pair.second}) {
      const double weight = (basis.adjoint() * st->amplitudes()).squaredNorm();
      if (weight < 1.0 - 1e-10) {
        throw ModelError("ising_ground_pair: product state has ground-space weight " +
                         format_double(weight));
      }
    }
  }
  return pair;
}

double number_variance(const ComplexVector& psi, const std::vector<ComplexMatrix>& number_ops) {
  double total = 0.0;
  for (const auto& n : number_ops) {
    const ComplexVector n_psi = n * psi;
    const double mean = psi.dot(n_psi).real();
    const double second = n_psi.squaredNorm();  // ⟨n²⟩ = ‖n ψ‖² for Hermitian n
    total += second - mean * mean;
  }
  return total;
}

double order_parameter(std::span<const double> variance_samples, double window) {
  if (variance_samples.size() < 2) {
    throw ParameterError("order_parameter: need at least two samples in the window");
  }
  if (!(window > 0.0)) {
    throw ParameterError("order_parameter: window must be positive");
  }
  const double h = window / static_cast<double>(variance_samples.size() - 1);
  double integral = 0.5 * (variance_samples.front() + variance_samples.back());
  for (std::size_t k = 1; k + 1 < variance_samples.size(); ++k) {
    integral += variance_samples[k];
  }
  return integral * h / window;
}

double order_parameter(std::span<const StateVector> states,
                       const std::vector<ComplexMatrix>& number_ops, double window) {
  if (states.empty()) {
    throw ParameterError("order_parameter: empty window");
  }
  std::vector<double> samples;
  samples.reserve(states.size());
  for (const auto& s : states) {
    samples.push_back(number_variance(s.amplitudes(), number_ops));
  }
  return order_parameter(std::span<const double>(samples), window);
}

}  // namespace qdyn
