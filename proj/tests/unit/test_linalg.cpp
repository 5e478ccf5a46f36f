#include "qdyn/error.hpp"
#include "qdyn/linalg.hpp"
#include "qdyn/matrix_json.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace {

using qdyn::Complex;
using qdyn::ComplexMatrix;
using qdyn::ComplexVector;

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(qdyn::kron(qdyn::identity(2), qdyn::identity(2)), qdyn::identity(4));
}

TEST(Kron, MatchesIndexFormulaOnRandomBlocks) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = oracle::random_matrix(2, 1.0, rng);
    const ComplexMatrix b = oracle::random_matrix(3, 1.0, rng);
    EXPECT_EQ(qdyn::kron(a, b), oracle::kron(a, b));
  }
}

TEST(Kron, MixedProductAndAssociativity) {
  std::mt19937 rng(12);
  const ComplexMatrix a = oracle::random_matrix(2, 1.0, rng);
  const ComplexMatrix b = oracle::random_matrix(3, 1.0, rng);
  const ComplexMatrix c = oracle::random_matrix(2, 1.0, rng);
  const ComplexMatrix d = oracle::random_matrix(3, 1.0, rng);
  EXPECT_LT(max_diff(qdyn::kron(a, b) * qdyn::kron(c, d), qdyn::kron(a * c, b * d)), 1e-12);
  EXPECT_LT(max_diff(qdyn::kron(qdyn::kron(a, b), c), qdyn::kron(a, qdyn::kron(b, c))), 1e-15);
}

TEST(Kron, SigmaXSigmaXIsTheSpinCouplingTerm) {
  const ComplexMatrix sx = oracle::sigma_x();
  EXPECT_EQ(qdyn::kron(sx, sx), oracle::spin_operator(2, {{0, sx}, {1, sx}}));
}

TEST(Kron, RefusesProductsAboveTheDimensionCap) {
  qdyn::ScopedDimensionLimit cap(8);
  EXPECT_THROW(qdyn::kron(qdyn::identity(4), qdyn::identity(4)), qdyn::DimensionLimitError);
  EXPECT_NO_THROW(qdyn::kron(qdyn::identity(2), qdyn::identity(4)));
}

TEST(Expm, ZeroScaleGivesIdentity) {
  std::mt19937 rng(1);
  const ComplexMatrix h = oracle::random_hermitian(5, 1.0, rng);
  EXPECT_LT(max_diff(qdyn::expm(h, 0.0), qdyn::identity(5)), 1e-15);
}

TEST(Expm, DiagonalCase) {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 0.5, -1.25, 3.0;
  const double t = 0.7;
  const ComplexMatrix u = qdyn::expm(d, Complex{0.0, -t});
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(std::abs(u(k, k) - std::exp(Complex{0.0, -d(k, k).real() * t})), 0.0, 1e-14);
  }
}

TEST(Expm, MatchesTaylorOracle) {
  std::mt19937 rng(2);
  for (double scale : {1e-3, 0.1, 1.0, 5.0, 40.0}) {
    const ComplexMatrix a = oracle::random_matrix(4, scale, rng);
    const ComplexMatrix ours = qdyn::expm(a, Complex{0.0, -0.3});
    const ComplexMatrix ref = oracle::expm_taylor(Complex{0.0, -0.3} * a);
    EXPECT_LT(max_diff(ours, ref), 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff())) << "scale " << scale;
  }
}

TEST(Expm, UnitaryForHermitianGenerators) {
  std::mt19937 rng(3);
  for (int dim : {2, 4, 8, 16}) {
    const ComplexMatrix h = oracle::random_hermitian(dim, 2.0, rng);
    const ComplexMatrix u = qdyn::expm(h, Complex{0.0, -1.7});
    EXPECT_LT(max_diff(u.adjoint() * u, qdyn::identity(dim)), 1e-12);
    const ComplexVector psi = ComplexVector::Random(dim).normalized();
    EXPECT_NEAR((u * psi).norm(), 1.0, 1e-10);
  }
}

TEST(Expm, RejectsNonSquare) {
  EXPECT_THROW(qdyn::expm(ComplexMatrix::Zero(2, 3)), qdyn::ShapeError);
}

TEST(EigGeneral, Diagonal) {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, 3.0;
  auto pairs = qdyn::eig_general(d);
  std::vector<double> values;
  for (const auto& p : pairs) values.push_back(p.value.real());
  std::sort(values.begin(), values.end());
  EXPECT_NEAR(values[0], 1.0, 1e-14);
  EXPECT_NEAR(values[1], 2.0, 1e-14);
  EXPECT_NEAR(values[2], 3.0, 1e-14);
}

TEST(EigGeneral, CompanionMatrixRoots) {
  // (x − 1)(x + 2)(x − 0.5i)(x + 3 + i)
  const std::vector<Complex> roots{1.0, -2.0, Complex{0.0, 0.5}, Complex{-3.0, -1.0}};
  std::vector<Complex> coeffs{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k] += coeffs[k];
      next[k + 1] -= r * coeffs[k];
    }
    coeffs = next;
  }
  const auto n = static_cast<Eigen::Index>(roots.size());
  ComplexMatrix companion = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) companion(0, k) = -coeffs[static_cast<std::size_t>(k) + 1];
  for (Eigen::Index k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
  const auto pairs = qdyn::eig_general(companion);
  ASSERT_EQ(pairs.size(), roots.size());
  for (const Complex& r : roots) {
    double best = 1e300;
    for (const auto& p : pairs) best = std::min(best, std::abs(p.value - r));
    EXPECT_LT(best, 1e-8);
  }
}

TEST(EigGeneral, ResidualBound) {
  std::mt19937 rng(4);
  const ComplexMatrix a = oracle::random_matrix(12, 1.0, rng);
  const double norm = qdyn::one_norm(a);
  for (const auto& p : qdyn::eig_general(a)) {
    EXPECT_LE((a * p.vector - p.value * p.vector).norm(), 1e-10 * norm);
    EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
  }
}

TEST(EigHermitian, SigmaZ) {
  const auto e = qdyn::eig_hermitian(oracle::sigma_z());
  EXPECT_DOUBLE_EQ(e.values(0), -1.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
}

TEST(EigHermitian, AgreesWithGeneralSolver) {
  std::mt19937 rng(5);
  const ComplexMatrix h = oracle::random_hermitian(6, 1.0, rng);
  const auto herm = qdyn::eig_hermitian(h);
  EXPECT_LT(max_diff(herm.vectors.adjoint() * herm.vectors, qdyn::identity(6)), 1e-10);
  std::vector<double> general;
  for (const auto& p : qdyn::eig_general(h)) general.push_back(p.value.real());
  std::sort(general.begin(), general.end());
  for (Eigen::Index k = 0; k < 6; ++k) EXPECT_NEAR(herm.values(k), general[static_cast<std::size_t>(k)], 1e-9);
}

TEST(EigHermitian, RejectsNonHermitian) {
  ComplexMatrix a = oracle::sigma_z();
  a(0, 1) = 0.5;
  EXPECT_THROW(qdyn::eig_hermitian(a), qdyn::SymmetryError);
}

TEST(Vectorize, ColumnStackingOrder) {
  ComplexMatrix rho(2, 2);
  rho << 1.0, 3.0, 2.0, 4.0;  // [[a, c], [b, d]]
  const ComplexVector v = qdyn::vectorize(rho);
  ASSERT_EQ(v.size(), 4);
  EXPECT_EQ(v(0), Complex(1.0));
  EXPECT_EQ(v(1), Complex(2.0));
  EXPECT_EQ(v(2), Complex(3.0));
  EXPECT_EQ(v(3), Complex(4.0));
}

TEST(Vectorize, RoundTripIsExact) {
  std::mt19937 rng(6);
  const ComplexMatrix rho = oracle::random_matrix(4, 1.0, rng);
  EXPECT_EQ(qdyn::devectorize(qdyn::vectorize(rho)), rho);
  EXPECT_EQ(qdyn::devectorize(qdyn::vectorize(rho), 4), rho);
}

TEST(Vectorize, SandwichIdentity) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = oracle::random_matrix(3, 1.0, rng);
    const ComplexMatrix x = oracle::random_matrix(3, 1.0, rng);
    const ComplexMatrix b = oracle::random_matrix(3, 1.0, rng);
    const ComplexVector lhs = qdyn::vectorize(a * x * b);
    const ComplexVector rhs = oracle::kron(b.transpose(), a) * qdyn::vectorize(x);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Vectorize, LengthMismatch) {
  EXPECT_THROW(qdyn::devectorize(ComplexVector::Zero(5)), qdyn::ShapeError);
  EXPECT_THROW(qdyn::devectorize(ComplexVector::Zero(9), 2), qdyn::ShapeError);
}

TEST(Validation, NonFiniteEntries) {
  ComplexMatrix a = qdyn::identity(2);
  a(1, 0) = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
  EXPECT_THROW(qdyn::require_valid(a, "test"), qdyn::ParameterError);
  EXPECT_THROW(qdyn::require_valid(ComplexMatrix(), "test"), qdyn::ShapeError);
}

TEST(MatrixJson, RoundTrip) {
  std::mt19937 rng(8);
  const ComplexMatrix m = oracle::random_matrix(3, 1.0, rng);
  EXPECT_EQ(qdyn::matrix_from_json(qdyn::matrix_to_json(m)), m);
  EXPECT_THROW(qdyn::matrix_from_json(nlohmann::json{{"rows", 2}, {"cols", 2}, {"re", {1}}, {"im", {0}}}),
               qdyn::ShapeError);
}

}  // namespace
