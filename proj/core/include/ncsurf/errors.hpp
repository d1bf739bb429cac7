#pragma once

#include <stdexcept>
#include <string>

namespace ncsurf {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (bad arguments, mismatched parameter sets).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but outside what the routine can handle
/// (non-polynomial profile in the symbolic kernel, non-invertible rho, ...).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A self-check failed; indicates a bug rather than bad input.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// Bounded positivity interval whose length is not an integer multiple of
/// epsilon: no finite unitary representation exists.
class QuantizationFailure : public Error {
 public:
  using Error::Error;
};

/// A map or recursion hit a pole at the requested parameters.
class SingularMapping : public Error {
 public:
  using Error::Error;
};

}  // namespace ncsurf
