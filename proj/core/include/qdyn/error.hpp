#pragma once

#include <stdexcept>
#include <string>

namespace qdyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or vector dimensions do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A Hilbert-space or superoperator dimension exceeds the configured cap.
class DimensionLimitError : public Error {
 public:
  using Error::Error;
};

/// A model or operation parameter is outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input expected to be Hermitian is not.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel (eigensolver) failed or produced large residuals.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Time stepping lost norm/trace or violated its step-size rule.
class NumericalStabilityError : public Error {
 public:
  using Error::Error;
};

/// Liouvillian spectral decomposition could not be completed.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Model-level consistency check failed (e.g. unexpected ground space).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Oscillatory quadrature did not converge.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration is malformed or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A run was refused because it would exceed the memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdyn
