#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace qdyn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Process-wide dimension cap applied to every Kronecker product and
/// Hilbert space. Defaults to 2^14, the 14-spin limit.
std::size_t max_dimension() noexcept;
void set_max_dimension(std::size_t dim) noexcept;

/// RAII override of the dimension cap, restoring the previous value.
class ScopedDimensionLimit {
 public:
  explicit ScopedDimensionLimit(std::size_t dim) noexcept : previous_(max_dimension()) {
    set_max_dimension(dim);
  }
  ~ScopedDimensionLimit() { set_max_dimension(previous_); }
  ScopedDimensionLimit(const ScopedDimensionLimit&) = delete;
  ScopedDimensionLimit& operator=(const ScopedDimensionLimit&) = delete;

 private:
  std::size_t previous_;
};

/// Throws ShapeError on empty dims, ParameterError on NaN/Inf entries.
void require_valid(const ComplexMatrix& a, const char* what);
void require_square(const ComplexMatrix& a, const char* what);

ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& a);
double hermiticity_deviation(const ComplexMatrix& a);
double one_norm(const ComplexMatrix& a);

/// Kronecker product a ⊗ b (block (i,j) is a(i,j)·b).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(scale·a) by scaling and squaring with diagonal Padé approximants
/// of degree 3, 5, 7, 9 or 13, chosen from the 1-norm of scale·a.
ComplexMatrix expm(const ComplexMatrix& a, Complex scale = Complex{1.0, 0.0});

struct EigenPair {
  Complex value;
  ComplexVector vector;  // unit 2-norm
};

/// Eigenpairs of a general square matrix (counting multiplicity).
/// Every returned pair satisfies ‖Av − λv‖ ≤ 1e-10·‖A‖₁.
std::vector<EigenPair> eig_general(const ComplexMatrix& a);

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns
};

/// Eigen-decomposition of a matrix Hermitian to 1e-10 (relative to its size).
HermitianEigen eig_hermitian(const ComplexMatrix& a);

/// Column stacking: (ρ11, ρ21, …, ρN1, ρ12, …, ρNN).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix devectorize(const ComplexVector& v);
ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index dim);

}  // namespace qdyn
