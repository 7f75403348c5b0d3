#pragma once

#include <stdexcept>
#include <string>

namespace thetablock {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands carry incompatible exponent denominators or ranks.
class DenominatorMismatch : public Error {
 public:
  using Error::Error;
};

/// An exact division left a nonzero remainder.
class NotDivisible : public Error {
 public:
  using Error::Error;
};

/// Negative power or inverse of a series without a monomial leading slice.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// The truncation window is too small for the requested quantity.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// A theta block containing a factor theta(tau, 0) vanishes identically.
class ZeroBlockError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Short-vector enumeration exceeded its candidate cap.
class EnumerationLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace thetablock
