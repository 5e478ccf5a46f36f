#include "qdyn/closed.hpp"
#include "qdyn/error.hpp"
#include "qdyn/models.hpp"
#include "qdyn/resources.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace {

using qdyn::Complex;
using qdyn::ComplexMatrix;

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<double> sorted_eigenvalues(const ComplexMatrix& h) {
  const auto e = qdyn::eig_hermitian(h);
  return {e.values.data(), e.values.data() + e.values.size()};
}

TEST(TwoSpin, MatchesDefinition) {
  const double j = 1.0;
  const double b = 0.1;
  const ComplexMatrix sx = oracle::sigma_x();
  const ComplexMatrix expected = -j * oracle::spin_operator(2, {{0, sx}, {1, sx}}) -
                                 b * (oracle::spin_operator(2, {{0, sx}}) + oracle::spin_operator(2, {{1, sx}}));
  const ComplexMatrix h = qdyn::two_spin_hamiltonian(j, b);
  EXPECT_LT(max_diff(h, expected), 1e-15);
  EXPECT_EQ(qdyn::hermiticity_deviation(h), 0.0);
}

TEST(TwoSpin, ZeroParametersGiveZero) {
  EXPECT_EQ(qdyn::two_spin_hamiltonian(0.0, 0.0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(TwoSpin, SpectrumMatchesDirectDiagonalization) {
  // In the σˣ eigenbasis the Hamiltonian is diagonal: E = −J s₁s₂ − B(s₁ + s₂).
  const double j = 1.0;
  const double b = 0.1;
  std::vector<double> expected;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) expected.push_back(-j * s1 * s2 - b * (s1 + s2));
  std::sort(expected.begin(), expected.end());
  const auto values = sorted_eigenvalues(qdyn::two_spin_hamiltonian(j, b));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(values[k], expected[k], 1e-12);
}

TEST(Ising, SmallestCase) {
  qdyn::IsingParams p;
  p.spins = 2;
  p.alpha = 0.0;
  p.field = 0.7;
  p.normalize = false;
  const ComplexMatrix sx = oracle::sigma_x();
  const ComplexMatrix sz = oracle::sigma_z();
  const ComplexMatrix expected = -oracle::spin_operator(2, {{0, sx}, {1, sx}}) -
                                 0.7 * (oracle::spin_operator(2, {{0, sz}}) + oracle::spin_operator(2, {{1, sz}}));
  const auto h = qdyn::ising_hamiltonian(p);
  EXPECT_LT(max_diff(h.total, expected), 1e-15);
  EXPECT_LT(max_diff(h.total, h.coupling + h.field), 1e-15);
}

TEST(Ising, LongRangeMatchesBasisLoopOracle) {
  qdyn::IsingParams p;
  p.spins = 5;
  p.alpha = 1.5;
  p.field = 1.0 / 0.42;
  const ComplexMatrix sx = oracle::sigma_x();
  const ComplexMatrix sz = oracle::sigma_z();
  double norm = 0.0;
  for (int d = 1; d < p.spins; ++d) norm += (p.spins - d) * std::pow(d, -p.alpha);
  norm /= (p.spins - 1);
  ComplexMatrix expected = ComplexMatrix::Zero(32, 32);
  for (int i = 0; i < p.spins; ++i) {
    for (int j = i + 1; j < p.spins; ++j) {
      expected -= std::pow(j - i, -p.alpha) / norm * oracle::spin_operator(5, {{i, sx}, {j, sx}});
    }
    expected -= p.field * oracle::spin_operator(5, {{i, sz}});
  }
  const auto h = qdyn::ising_hamiltonian(p);
  EXPECT_LT(max_diff(h.total, expected), 1e-12);
  EXPECT_NEAR(qdyn::ising_coupling(p, 1, 2), 1.0 / norm, 1e-15);
  EXPECT_NEAR(qdyn::ising_coupling(p, 4, 2), std::pow(2.0, -1.5) / norm, 1e-15);
}

TEST(Ising, ZeroFieldCommutesWithParity) {
  qdyn::IsingParams p;
  p.spins = 4;
  p.alpha = 0.8;
  const ComplexMatrix sx = oracle::sigma_x();
  const ComplexMatrix parity = oracle::spin_operator(4, {{0, sx}, {1, sx}, {2, sx}, {3, sx}});
  const auto h = qdyn::ising_hamiltonian(p);
  EXPECT_LT(qdyn::commutator(h.total, parity).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(qdyn::hermiticity_deviation(h.coupling), 1e-12);
  EXPECT_LT(qdyn::hermiticity_deviation(h.field), 1e-12);
}

TEST(Ising, CouplingGroundSpaceIsTheFerromagneticPair) {
  qdyn::IsingParams p;
  p.spins = 4;
  p.alpha = 1.5;
  const auto h = qdyn::ising_hamiltonian(p);
  const auto e = qdyn::eig_hermitian(h.coupling);
  ASSERT_NEAR(e.values(0), e.values(1), 1e-10);
  ASSERT_GT(e.values(2) - e.values(1), 1e-3);
  const ComplexMatrix ground = e.vectors.leftCols(2);
  const auto pair = qdyn::ising_ground_pair(4, 1.5);
  for (const auto* s : {&pair.first, &pair.second}) {
    const double weight = (ground.adjoint() * s->amplitudes()).squaredNorm();
    EXPECT_GT(weight, 1.0 - 1e-10);
  }
}

TEST(Ising, MemoryEstimateForFourteenSpins) {
  const auto m = qdyn::memory_estimate(std::int64_t{1} << 14);
  EXPECT_NEAR(m.real_double_gb, 2.147483648, 1e-9);
  EXPECT_NEAR(std::ceil(m.real_double_gb * 10.0) / 10.0, 2.2, 1e-12);
  EXPECT_DOUBLE_EQ(m.complex_bytes, 16.0 * std::pow(2.0, 28));
  EXPECT_NO_THROW(qdyn::require_within_budget(std::int64_t{1} << 14, "test"));
  EXPECT_THROW(qdyn::require_within_budget(std::int64_t{1} << 15, "test"), qdyn::ResourceError);
}

qdyn::CavityArrayParams cavity(bool rwa) {
  qdyn::CavityArrayParams p;
  p.cavities = 2;
  p.omega_c = 1.0;
  p.omega_a = 1.3;
  p.coupling = 1e-2;
  p.hopping = 1e-4;
  p.cutoff = 2;
  p.adjacency = {{0, 1}, {0, 0}};
  p.rwa = rwa;
  return p;
}

ComplexMatrix total_excitations(const qdyn::CavityArrayParams& p) {
  ComplexMatrix n = ComplexMatrix::Zero(36, 36);
  for (const auto& op : qdyn::polariton_number_operators(p)) n += op;
  return n;
}

TEST(Cavity, DecoupledSpectrum) {
  qdyn::CavityArrayParams p;
  p.cavities = 1;
  p.omega_c = 1.0;
  p.omega_a = 0.37;
  p.cutoff = 3;
  const auto values = sorted_eigenvalues(qdyn::cavity_hamiltonian(p));
  std::vector<double> expected;
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 1; ++m) expected.push_back(n * p.omega_c + m * p.omega_a);
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(values.size(), expected.size());
  for (std::size_t k = 0; k < values.size(); ++k) EXPECT_NEAR(values[k], expected[k], 1e-12);
}

TEST(Cavity, JaynesCummingsConservesExcitations) {
  const auto p = cavity(true);
  const ComplexMatrix h = qdyn::cavity_hamiltonian(p);
  EXPECT_LT(qdyn::hermiticity_deviation(h), 1e-12);
  EXPECT_LT(qdyn::commutator(h, total_excitations(p)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Cavity, RabiBreaksExcitationConservation) {
  const auto p = cavity(false);
  const ComplexMatrix h = qdyn::cavity_hamiltonian(p);
  EXPECT_LT(qdyn::hermiticity_deviation(h), 1e-12);
  EXPECT_GT(qdyn::commutator(h, total_excitations(p)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Cavity, MatchesOperatorDefinition) {
  for (bool rwa : {true, false}) {
    const auto p = cavity(rwa);
    using qdyn::CavityOperator;
    ComplexMatrix expected = ComplexMatrix::Zero(36, 36);
    std::vector<ComplexMatrix> a;
    std::vector<ComplexMatrix> sp;
    for (int i = 1; i <= 2; ++i) {
      a.push_back(qdyn::embed_cavity_pair(2, i, CavityOperator::PhotonAnnihilation, 2));
      sp.push_back(qdyn::embed_cavity_pair(2, i, CavityOperator::AtomRaising, 2));
    }
    for (int i = 0; i < 2; ++i) {
      const ComplexMatrix& ai = a[static_cast<std::size_t>(i)];
      const ComplexMatrix& si = sp[static_cast<std::size_t>(i)];
      expected += p.omega_c * ai.adjoint() * ai + p.omega_a * si * si.adjoint();
      if (rwa) {
        expected += p.coupling * (ai * si + ai.adjoint() * si.adjoint());
      } else {
        expected += p.coupling * (si + si.adjoint()) * (ai + ai.adjoint());
      }
    }
    expected -= p.hopping * (a[0] * a[1].adjoint() + a[0].adjoint() * a[1]);
    EXPECT_LT(max_diff(qdyn::cavity_hamiltonian(p), expected), 1e-14) << "rwa " << rwa;
  }
}

TEST(Cavity, AdjacencySymmetrization) {
  auto p = cavity(true);
  std::vector<std::string> warnings;
  EXPECT_EQ(qdyn::symmetrize_adjacency(p, &warnings), (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
  EXPECT_TRUE(warnings.empty());
  p.cavities = 3;
  p.adjacency = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  const auto sym = qdyn::symmetrize_adjacency(p, &warnings);
  EXPECT_EQ(sym[0][2], 1);
  EXPECT_EQ(sym[2][0], 1);
  EXPECT_FALSE(warnings.empty());
  p.adjacency = {{0, 1}, {1, 0}};
  EXPECT_THROW(qdyn::symmetrize_adjacency(p), qdyn::ShapeError);
}

TEST(Cavity, EmptyAdjacencyIsAnOpenChain) {
  auto p = cavity(true);
  p.cavities = 3;
  p.adjacency.clear();
  EXPECT_EQ(qdyn::symmetrize_adjacency(p), (std::vector<std::vector<int>>{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
}

TEST(Mott, WeakCouplingLimit) {
  auto p = cavity(true);
  p.coupling = 1e-12;
  p.omega_a = 1.5;
  const auto psi = qdyn::mott_initial_state(p);
  // |e,1⟩ ⊗ |e,1⟩: local index 1 in each (atom ⊗ photon) factor of dimension 6.
  EXPECT_NEAR(std::abs(psi.amplitudes()(1 * 6 + 1)), 1.0, 1e-10);
}

TEST(Mott, ResonantCase) {
  auto p = cavity(true);
  p.cavities = 1;
  p.adjacency.clear();
  p.omega_a = p.omega_c;
  const auto psi = qdyn::mott_initial_state(p);
  // θ = atan2(2g, 0) = π/2 leaves −|g,0⟩, at index 1·3 + 0.
  EXPECT_NEAR(psi.amplitudes()(3).real(), -1.0, 1e-12);
  EXPECT_NEAR(std::abs(psi.amplitudes()(1)), 0.0, 1e-12);
}

TEST(Mott, NormalizedForRandomParameters) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> g(0.0, 0.1);
  std::uniform_real_distribution<double> delta(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = cavity(true);
    p.coupling = g(rng);
    p.omega_a = p.omega_c + delta(rng);
    EXPECT_NEAR(qdyn::mott_initial_state(p).amplitudes().norm(), 1.0, 1e-12);
  }
}

TEST(Mott, FollowsTheDressedStateFormula) {
  auto p = cavity(true);
  const double theta = std::atan2(2.0 * p.coupling, p.detuning());
  Eigen::VectorXcd local = Eigen::VectorXcd::Zero(6);
  local(1) = std::cos(theta);
  local(3) = -std::sin(theta);
  const Eigen::VectorXcd expected = oracle::kron(local, local);
  EXPECT_LT((qdyn::mott_initial_state(p).amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Channels, DissipativeIsing) {
  const auto channels = qdyn::dissipative_ising_channels({0.04, 0.02});
  ASSERT_EQ(channels.size(), 2u);
  EXPECT_DOUBLE_EQ(channels[1].rate, 0.02);
  const ComplexMatrix up = oracle::sigma_minus().adjoint() * oracle::sigma_minus();
  for (int i = 0; i < 2; ++i) {
    const auto& c = channels[static_cast<std::size_t>(i)];
    EXPECT_EQ(c.op, oracle::spin_operator(2, {{i, oracle::sigma_minus()}}));
    EXPECT_EQ(c.op.adjoint() * c.op, oracle::spin_operator(2, {{i, up}}));
  }
  EXPECT_THROW(qdyn::dissipative_ising_channels({0.1, -0.1}), qdyn::ParameterError);
}

TEST(Channels, TwoLevelPhotonModel) {
  const auto cold = qdyn::tls_photon_model(1.0, 0.2, 0.0);
  ASSERT_EQ(cold.channels.size(), 1u);
  EXPECT_EQ(cold.channels[0].op, oracle::sigma_minus());
  EXPECT_DOUBLE_EQ(cold.channels[0].rate, 0.2);
  EXPECT_LT(max_diff(cold.hamiltonian, -0.5 * oracle::sigma_x()), 1e-15);

  const auto warm = qdyn::tls_photon_model(1.0, 0.2, 0.5);
  ASSERT_EQ(warm.channels.size(), 2u);
  EXPECT_DOUBLE_EQ(warm.channels[0].rate, 0.2 * 1.5);
  EXPECT_DOUBLE_EQ(warm.channels[1].rate, 0.2 * 0.5);
  EXPECT_EQ(warm.channels[1].op, oracle::sigma_minus().adjoint());
  EXPECT_THROW(qdyn::tls_photon_model(1.0, -0.2, 0.0), qdyn::ParameterError);
  EXPECT_THROW(qdyn::tls_photon_model(1.0, 0.2, -1.0), qdyn::ParameterError);
}

TEST(Models, Deterministic) {
  EXPECT_EQ(qdyn::cavity_hamiltonian(cavity(false)), qdyn::cavity_hamiltonian(cavity(false)));
  qdyn::IsingParams p;
  p.spins = 6;
  p.alpha = 1.5;
  p.field = 2.0;
  EXPECT_EQ(qdyn::ising_hamiltonian(p).total, qdyn::ising_hamiltonian(p).total);
}

}  // namespace
