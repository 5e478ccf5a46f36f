#pragma once

#include "qdyn/linalg.hpp"
#include "qdyn/operators.hpp"

#include <string>
#include <vector>

namespace qdyn {

class StateVector;

/// One dissipative channel γ·(LρL† − ½{L†L, ρ}).
struct LindbladChannel {
  ComplexMatrix op;
  double rate = 0.0;
};

/// −J σ₁ˣσ₂ˣ − B(σ₁ˣ + σ₂ˣ) on two spins.
ComplexMatrix two_spin_hamiltonian(double coupling, double field);

struct IsingParams {
  int spins = 2;
  double alpha = 0.0;   // power-law exponent of |i−j|^{−α}
  double field = 0.0;   // transverse field B along z
  bool normalize = true;
};

/// J_ij = |i−j|^{−α} / 𝒥 with 𝒥 = (N−1)⁻¹ Σ_{i>j} |i−j|^{−α} when normalizing,
/// 𝒥 = 1 otherwise. Indices are 1-based.
double ising_coupling(const IsingParams& p, int i, int j);

struct IsingHamiltonian {
  ComplexMatrix total;
  ComplexMatrix coupling;  // H1 = −Σ_{i<j} J_ij σᵢˣσⱼˣ
  ComplexMatrix field;     // H0 = −B Σ σᵢᶻ
};

IsingHamiltonian ising_hamiltonian(const IsingParams& p);

struct CavityArrayParams {
  int cavities = 2;
  double omega_c = 1.0;
  double omega_a = 1.0;
  double coupling = 0.0;  // light–atom g
  double hopping = 0.0;   // photon hopping J
  int cutoff = 2;
  /// L×L 0/1 matrix; only the upper triangle is required. Empty means an open chain.
  std::vector<std::vector<int>> adjacency;
  bool rwa = true;  // true: Jaynes–Cummings coupling, false: Rabi coupling

  double detuning() const noexcept { return omega_a - omega_c; }
};

/// A + Aᵀ clipped to {0,1}. Appends a warning when the input has entries in
/// both triangles that disagree; strictly upper-triangular input is the
/// expected form and is accepted silently.
std::vector<std::vector<int>> symmetrize_adjacency(const CavityArrayParams& p,
                                                   std::vector<std::string>* warnings = nullptr);

/// Σᵢ[ωc âᵢ†âᵢ + ωa σᵢ⁺σᵢ⁻ + coupling] − J Σ_{i<j} A_ij(âᵢâⱼ† + âᵢ†âⱼ).
ComplexMatrix cavity_hamiltonian(const CavityArrayParams& p,
                                 std::vector<std::string>* warnings = nullptr);

/// n̂ᵢ = âᵢ†âᵢ + σᵢ⁺σᵢ⁻ for every cavity.
std::vector<ComplexMatrix> polariton_number_operators(const CavityArrayParams& p);

/// Product of cos θ|e,1⟩ − sin θ|g,0⟩ over all cavities, θ = atan2(2g, Δ).
StateVector mott_initial_state(const CavityArrayParams& p);

/// (Sᵢ⁻, γᵢ) for each spin; the chain length is the number of rates.
std::vector<LindbladChannel> dissipative_ising_channels(const std::vector<double>& rates);

struct TwoLevelPhotonModel {
  ComplexMatrix hamiltonian;  // −(Ω/2)(σ₊ + σ₋)
  std::vector<LindbladChannel> channels;
};

/// Two-level atom in a thermal photon bath: decay γ₀(N+1) and, for N > 0,
/// absorption γ₀N.
TwoLevelPhotonModel tls_photon_model(double rabi, double gamma0, double photons);

}  // namespace qdyn
