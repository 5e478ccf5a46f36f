#pragma once

#include "qdyn/linalg.hpp"
#include "qdyn/operators.hpp"
#include "qdyn/time_series.hpp"

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qdyn {

/// Normalized pure state; ‖ψ‖ = 1 within 1e-8 is checked on construction.
class StateVector {
 public:
  explicit StateVector(ComplexVector amplitudes);

  /// Rescales `v` to unit norm; throws ParameterError for the zero vector.
  static StateVector normalized(ComplexVector v);
  static StateVector basis(Eigen::Index dim, Eigen::Index index);
  /// Kronecker product of (already normalized) local states, left to right.
  static StateVector product(const std::vector<ComplexVector>& locals);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  Eigen::Index dim() const noexcept { return amplitudes_.size(); }

  /// ⟨this|other⟩
  Complex overlap(const StateVector& other) const;
  Complex expectation(const ComplexMatrix& op) const;

 private:
  ComplexVector amplitudes_;
};

struct NamedOperator {
  std::string name;
  ComplexMatrix op;
};

using StepObserver = std::function<void(std::size_t step, double t, const ComplexVector& psi)>;

/// ψ_{n+1} = U ψ_n with U = exp(−iH·dt) built once. Calls `observer` for
/// every grid point including t_start. Warns (through `warnings`) when
/// dt > 0.1/‖H‖₁ and throws NumericalStabilityError once the norm drifts by
/// more than 1e-6. Valid only for time-independent H.
void propagate(const ComplexMatrix& hamiltonian, const StateVector& psi0, const TimeGrid& grid,
               const StepObserver& observer, std::vector<std::string>* warnings = nullptr);

/// Records ⟨ψ|O|ψ⟩ for every observable at every grid point. Hermitian
/// observables yield real columns, others complex ones.
TimeSeries propagate(const ComplexMatrix& hamiltonian, const StateVector& psi0,
                     const TimeGrid& grid, const std::vector<NamedOperator>& observables);

enum class Axis { X, Y, Z };

/// (1/N) Σᵢ Sᵢᵅ on a chain of spins.
ComplexMatrix magnetization_operator(const HilbertSpace& space, Axis axis);

/// Value reported when every return probability is exactly zero.
inline constexpr double kRateFunctionCap = 1e3;

/// min over the reference pair of −ln|⟨Ψ_η|Ψ(t)⟩|² / N.
double ising_rate_function(const std::pair<StateVector, StateVector>& ground_pair,
                           const StateVector& psi_t, int spins);

/// −log₂|⟨Ψ(0)|Ψ(t)⟩|² / L.
double cavity_rate_function(const StateVector& psi0, const StateVector& psi_t, int cavities);
/// Same, from the return probability |⟨Ψ(0)|Ψ(t)⟩|².
double cavity_rate_function(double return_probability, int cavities);

/// ⊗(|↑⟩+|↓⟩)/√2 and ⊗(|↑⟩−|↓⟩)/√2. For N ≤ 8 both are checked to lie in the
/// degenerate ground space of the coupling Hamiltonian; a failed check throws
/// ModelError.
std::pair<StateVector, StateVector> ising_ground_pair(int spins, double alpha);

/// Σᵢ (⟨n̂ᵢ²⟩ − ⟨n̂ᵢ⟩²)
double number_variance(const ComplexVector& psi, const std::vector<ComplexMatrix>& number_ops);

/// (1/T) Σᵢ ∫₀ᵀ Var(n̂ᵢ) dτ by the trapezoidal rule over states sampled
/// uniformly on [0, T].
double order_parameter(std::span<const StateVector> states,
                       const std::vector<ComplexMatrix>& number_ops, double window);

/// Same average from precomputed integrand samples on a uniform grid.
double order_parameter(std::span<const double> variance_samples, double window);

}  // namespace qdyn
