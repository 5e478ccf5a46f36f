#include "qdyn/linalg.hpp"

#include "qdyn/error.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace qdyn {

namespace {

std::atomic<std::size_t> g_max_dimension{std::size_t{1} << 14};

std::string dims(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace

std::size_t max_dimension() noexcept { return g_max_dimension.load(std::memory_order_relaxed); }

void set_max_dimension(std::size_t dim) noexcept {
  g_max_dimension.store(dim, std::memory_order_relaxed);
}

void require_valid(const ComplexMatrix& a, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw ShapeError(std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw ParameterError(std::string(what) + ": non-finite entry");
  }
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " + dims(a));
  }
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const ComplexMatrix& a) { return max_abs(a - a.adjoint()); }

double one_norm(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_valid(a, "kron");
  require_valid(b, "kron");
  const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  if (rows > max_dimension() || cols > max_dimension()) {
    throw DimensionLimitError("kron: result " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " exceeds dimension cap " +
                              std::to_string(max_dimension()));
  }
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<EigenPair> eig_general(const ComplexMatrix& a) {
  require_square(a, "eig_general");
  require_valid(a, "eig_general");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eig_general: QR iteration did not converge for dimension " +
                           std::to_string(a.rows()));
  }
  const double scale = std::max(one_norm(a), 1e-300);
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    ComplexVector v = solver.eigenvectors().col(k);
    v.normalize();
    const Complex lambda = solver.eigenvalues()(k);
    const double residual = (a * v - lambda * v).norm();
    if (residual > 1e-10 * scale) {
      throw ConvergenceError("eig_general: residual " + std::to_string(residual) +
                             " for eigenpair " + std::to_string(k) + " of dimension " +
                             std::to_string(a.rows()));
    }
    pairs.push_back({lambda, std::move(v)});
  }
  return pairs;
}

HermitianEigen eig_hermitian(const ComplexMatrix& a) {
  require_square(a, "eig_hermitian");
  require_valid(a, "eig_hermitian");
  const double deviation = hermiticity_deviation(a);
  if (deviation > 1e-10 * std::max(1.0, max_abs(a))) {
    throw SymmetryError("eig_hermitian: matrix deviates from Hermitian by " +
                        std::to_string(deviation));
  }
  const ComplexMatrix symmetric = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eig_hermitian: did not converge for dimension " +
                           std::to_string(a.rows()));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  require_square(rho, "vectorize");
  const Eigen::Index n = rho.rows();
  ComplexVector v(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      v(j * n + i) = rho(i, j);
    }
  }
  return v;
}

ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index dim) {
  if (dim < 1 || dim * dim != v.size()) {
    throw ShapeError("devectorize: length " + std::to_string(v.size()) +
                     " does not match dimension " + std::to_string(dim));
  }
  ComplexMatrix rho(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      rho(i, j) = v(j * dim + i);
    }
  }
  return rho;
}

ComplexMatrix devectorize(const ComplexVector& v) {
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (dim * dim != v.size()) {
    throw ShapeError("devectorize: length " + std::to_string(v.size()) + " is not a perfect square");
  }
  return devectorize(v, dim);
}

}  // namespace qdyn
