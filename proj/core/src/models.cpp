#include "qdyn/models.hpp"

#include "qdyn/closed.hpp"
#include "qdyn/error.hpp"
#include "qdyn/resources.hpp"

#include <cmath>
#include <string>

namespace qdyn {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be finite");
  }
}

void require_non_negative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ParameterError(std::string(what) + " must be a finite non-negative number, got " +
                         format_double(v));
  }
}

}  // namespace

ComplexMatrix two_spin_hamiltonian(double coupling, double field) {
  require_finite(coupling, "two_spin_hamiltonian: J");
  require_finite(field, "two_spin_hamiltonian: B");
  const HilbertSpace space = HilbertSpace::spins(2);
  const ComplexMatrix sx = pauli(PauliKind::X);
  const ComplexMatrix x1 = embed(space, 1, sx);
  const ComplexMatrix x2 = embed(space, 2, sx);
  return -coupling * (x1 * x2) - field * (x1 + x2);
}

double ising_coupling(const IsingParams& p, int i, int j) {
  if (p.spins < 2) throw ParameterError("ising: N must be at least 2");
  if (i < 1 || j < 1 || i > p.spins || j > p.spins || i == j) {
    throw ParameterError("ising_coupling: need distinct indices in 1..N");
  }
  require_non_negative(p.alpha, "ising: alpha");
  auto raw = [&](int d) { return std::pow(static_cast<double>(d), -p.alpha); };
  double norm = 1.0;
  if (p.normalize) {
    double sum = 0.0;
    for (int d = 1; d < p.spins; ++d) sum += (p.spins - d) * raw(d);
    norm = sum / (p.spins - 1);
  }
  return raw(std::abs(i - j)) / norm;
}

IsingHamiltonian ising_hamiltonian(const IsingParams& p) {
  if (p.spins < 2) throw ParameterError("ising: N must be at least 2");
  require_non_negative(p.alpha, "ising: alpha");
  require_finite(p.field, "ising: B");
  const HilbertSpace space = HilbertSpace::spins(p.spins);
  const Eigen::Index dim = space.total_dim();
  require_within_budget(dim, "ising_hamiltonian");

  // Site i (1-based) is bit N−i of the basis index; bit 0 means |↑⟩.
  // σᵢˣσⱼˣ flips two bits, so H1 is filled as a signed permutation sum.
  IsingHamiltonian h;
  h.coupling = ComplexMatrix::Zero(dim, dim);
  h.field = ComplexMatrix::Zero(dim, dim);
  for (int i = 1; i <= p.spins; ++i) {
    for (int j = i + 1; j <= p.spins; ++j) {
      const double jij = ising_coupling(p, i, j);
      const Eigen::Index mask = (Eigen::Index{1} << (p.spins - i)) | (Eigen::Index{1} << (p.spins - j));
      for (Eigen::Index b = 0; b < dim; ++b) {
        h.coupling(b ^ mask, b) -= jij;
      }
    }
  }
  for (Eigen::Index b = 0; b < dim; ++b) {
    int up_minus_down = 0;
    for (int i = 1; i <= p.spins; ++i) {
      up_minus_down += ((b >> (p.spins - i)) & 1) == 0 ? 1 : -1;
    }
    h.field(b, b) = -p.field * up_minus_down;
  }
  h.total = h.coupling + h.field;
  return h;
}

std::vector<std::vector<int>> symmetrize_adjacency(const CavityArrayParams& p,
                                                   std::vector<std::string>* warnings) {
  const auto l = static_cast<std::size_t>(p.cavities);
  std::vector<std::vector<int>> sym(l, std::vector<int>(l, 0));
  if (p.adjacency.empty()) {
    for (std::size_t i = 0; i + 1 < l; ++i) sym[i][i + 1] = sym[i + 1][i] = 1;
    return sym;
  }
  if (p.adjacency.size() != l) {
    throw ShapeError("adjacency: expected " + std::to_string(l) + " rows, got " +
                     std::to_string(p.adjacency.size()));
  }
  bool upper = false;
  bool lower = false;
  bool asymmetric = false;
  for (std::size_t i = 0; i < l; ++i) {
    if (p.adjacency[i].size() != l) {
      throw ShapeError("adjacency: row " + std::to_string(i + 1) + " has " +
                       std::to_string(p.adjacency[i].size()) + " entries, expected " +
                       std::to_string(l));
    }
    for (std::size_t j = 0; j < l; ++j) {
      const int a = p.adjacency[i][j];
      if (a != 0 && a != 1) throw ParameterError("adjacency: entries must be 0 or 1");
      if (i == j && a != 0) throw ParameterError("adjacency: diagonal must be zero");
      if (a == 1) (j > i ? upper : lower) = true;
      if (a != p.adjacency[j][i]) asymmetric = true;
    }
  }
  if (upper && lower && asymmetric && warnings != nullptr) {
    warnings->push_back("adjacency: both triangles are populated but disagree; using A + A^T");
  }
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      if (p.adjacency[i][j] == 1) sym[i][j] = sym[j][i] = 1;
    }
  }
  return sym;
}

namespace {

void validate(const CavityArrayParams& p) {
  if (p.cavities < 1) throw ParameterError("cavity array: L must be at least 1");
  if (p.cutoff < 1) throw ParameterError("cavity array: cutoff must be at least 1");
  require_finite(p.omega_c, "cavity array: omega_c");
  require_finite(p.omega_a, "cavity array: omega_a");
  require_finite(p.coupling, "cavity array: g");
  require_finite(p.hopping, "cavity array: J");
}

}  // namespace

ComplexMatrix cavity_hamiltonian(const CavityArrayParams& p, std::vector<std::string>* warnings) {
  validate(p);
  const HilbertSpace space = HilbertSpace::cavity_array(p.cavities, p.cutoff);
  require_within_budget(space.total_dim(), "cavity_hamiltonian");
  const auto adjacency = symmetrize_adjacency(p, warnings);

  std::vector<ComplexMatrix> a;
  std::vector<ComplexMatrix> sp;
  for (int i = 1; i <= p.cavities; ++i) {
    a.push_back(embed_cavity_pair(p.cavities, i, CavityOperator::PhotonAnnihilation, p.cutoff));
    sp.push_back(embed_cavity_pair(p.cavities, i, CavityOperator::AtomRaising, p.cutoff));
  }

  const Eigen::Index dim = space.total_dim();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const ComplexMatrix ad = a[i].adjoint();
    const ComplexMatrix sm = sp[i].adjoint();
    h += p.omega_c * (ad * a[i]) + p.omega_a * (sp[i] * sm);
    if (p.rwa) {
      h += p.coupling * (a[i] * sp[i] + ad * sm);
    } else {
      h += p.coupling * ((sp[i] + sm) * (a[i] + ad));
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (adjacency[i][j] == 0) continue;
      h -= p.hopping * (a[i] * a[j].adjoint() + a[i].adjoint() * a[j]);
    }
  }
  return h;
}

std::vector<ComplexMatrix> polariton_number_operators(const CavityArrayParams& p) {
  validate(p);
  std::vector<ComplexMatrix> ops;
  for (int i = 1; i <= p.cavities; ++i) {
    const ComplexMatrix a = embed_cavity_pair(p.cavities, i, CavityOperator::PhotonAnnihilation, p.cutoff);
    const ComplexMatrix s = embed_cavity_pair(p.cavities, i, CavityOperator::AtomRaising, p.cutoff);
    ops.push_back(a.adjoint() * a + s * s.adjoint());
  }
  return ops;
}

StateVector mott_initial_state(const CavityArrayParams& p) {
  validate(p);
  const double theta = std::atan2(2.0 * p.coupling, p.detuning());
  const Eigen::Index photons = p.cutoff + 1;
  // Local basis index = atom·(cutoff+1) + n with |e⟩ → 0, |g⟩ → 1.
  ComplexVector local = ComplexVector::Zero(2 * photons);
  local(1) = std::cos(theta);
  local(photons) = -std::sin(theta);
  return StateVector::product(std::vector<ComplexVector>(static_cast<std::size_t>(p.cavities), local));
}

std::vector<LindbladChannel> dissipative_ising_channels(const std::vector<double>& rates) {
  if (rates.empty()) throw ParameterError("dissipative_ising_channels: no rates given");
  const HilbertSpace space = HilbertSpace::spins(static_cast<int>(rates.size()));
  std::vector<LindbladChannel> channels;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    require_non_negative(rates[i], "dissipative_ising_channels: rate");
    channels.push_back({embed(space, static_cast<int>(i) + 1, pauli(PauliKind::Lowering)), rates[i]});
  }
  return channels;
}

TwoLevelPhotonModel tls_photon_model(double rabi, double gamma0, double photons) {
  require_finite(rabi, "tls_photon_model: Omega");
  require_non_negative(gamma0, "tls_photon_model: gamma0");
  require_non_negative(photons, "tls_photon_model: N_ph");
  TwoLevelPhotonModel m;
  m.hamiltonian = -0.5 * rabi * pauli(PauliKind::X);
  m.channels.push_back({pauli(PauliKind::Lowering), gamma0 * (photons + 1.0)});
  if (photons > 0.0) {
    m.channels.push_back({pauli(PauliKind::Raising), gamma0 * photons});
  }
  return m;
}

}  // namespace qdyn
