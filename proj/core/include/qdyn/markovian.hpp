#pragma once

#include "qdyn/closed.hpp"
#include "qdyn/linalg.hpp"
#include "qdyn/models.hpp"
#include "qdyn/time_series.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace qdyn {

/// Hermitian, unit-trace, positive semidefinite (all within 1e-8).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix matrix);
  static DensityMatrix pure(const StateVector& psi);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

/// Column-stacked generator: −i(I⊗H − Hᵀ⊗I) + Σ γ(L̄⊗L − ½I⊗L†L − ½(L†L)ᵀ⊗I).
ComplexMatrix build_liouvillian(const ComplexMatrix& hamiltonian,
                                const std::vector<LindbladChannel>& channels);

/// Right-hand side −i[H,ρ] + Σ γ(LρL† − ½{L†L, ρ}) applied directly.
ComplexMatrix lindblad_rhs(const ComplexMatrix& hamiltonian,
                           const std::vector<LindbladChannel>& channels, const ComplexMatrix& rho);

inline constexpr double kDefaultSpectralTol = 1e-4;

struct SpectralMode {
  Complex lambda;
  ComplexMatrix right;  // R_k
  ComplexMatrix left;   // L_k, with Tr(L_j R_k) = δ_jk
};

struct LiouvillianSpectrum {
  std::vector<SpectralMode> modes;  // descending Re λ, ties by descending Im λ
  double tol = kDefaultSpectralTol;
  ComplexMatrix liouvillian;

  Eigen::Index system_dim() const noexcept { return modes.empty() ? 0 : modes.front().right.rows(); }
  double max_abs_eigenvalue() const noexcept;
  /// Largest |Tr(L_j R_k) − δ_jk| over all pairs.
  double biorthogonality_residual() const;
};

/// Eigen-decomposition of 𝕃 into biorthonormal right/left eigenmatrices.
///
/// Eigenvalues closer than `tol` are treated as one cluster. Each cluster's
/// right and left invariant subspaces are biorthogonalized and then
/// diagonalized in the reduced basis, so exactly degenerate modes come out
/// biorthonormal. Throws DecompositionError when left and right clusters
/// cannot be matched, when a cluster is defective, or when no |λ| is within tol of zero.
LiouvillianSpectrum decompose(const ComplexMatrix& liouvillian, double tol = kDefaultSpectralTol);

/// c_k = Tr(ρ₀ L_k).
std::vector<Complex> spectral_weights(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0);

/// Σ c_k e^{λ_k t} R_k.
ComplexMatrix spectral_state(const LiouvillianSpectrum& spectrum, const std::vector<Complex>& weights,
                             double t);

/// ρ(t) at every grid point plus `trace`, `hermiticity_deviation` and
/// `min_eigenvalue` diagnostic columns. Throws DecompositionError once the
/// trace drifts by more than 1e-6.
TimeSeries evolve_spectral(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0,
                           const TimeGrid& grid, const std::vector<NamedOperator>& observables);

/// c₁R₁ rescaled to unit trace. Throws DecompositionError when the λ = 0
/// eigenspace is degenerate and NumericalStabilityError when the result
/// leaves a residual ‖𝕃ρ‖ above 1e-8. Rescaling beyond rounding is logged.
DensityMatrix steady_state(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0,
                           std::vector<std::string>* log = nullptr);

struct EnvelopeMode {
  std::size_t index = 0;
  Complex lambda;
  /// Σ|w_k| over contributing decaying modes; |⟨O⟩(t) − ⟨O⟩_ss| ≤ bound·e^{Re λ t}.
  double bound = 0.0;
};

/// Slowest decaying mode (Re λ < −tol) that contributes to the signal.
/// Mode k contributes when |w_k| > 1e-10, with w_k = c_k Tr(O R_k) if an
/// observable is given and w_k = c_k ‖R_k‖_F otherwise. Throws
/// DecompositionError if no decaying mode contributes.
EnvelopeMode envelope_mode(const LiouvillianSpectrum& spectrum, const DensityMatrix& rho0,
                           const ComplexMatrix* observable = nullptr);

/// Closed-form p_e(t) and ⟨σ₊(t)⟩ for the driven, decaying two-level atom
/// starting in |g⟩ at zero photon number. Columns `p_e` (real) and
/// `sigma_plus` (complex).
TimeSeries tls_exact_benchmark(double rabi, double gamma0, const TimeGrid& grid);

/// [{lambda_re, lambda_im, R, L}, …] with matrices in matrix-json form.
nlohmann::json spectrum_to_json(const LiouvillianSpectrum& spectrum);

}  // namespace qdyn
