#pragma once

#include <stdexcept>
#include <string>

namespace qlat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// An input violates an operation's precondition (invalid lattice, rank
/// mismatch, non-prime modulus, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precondition"; }
};

/// An enumeration exceeded its configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "resource"; }
};

/// A p-adic decision could not be certified at the largest allowed precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precision"; }
};

/// A bounded search finished without result. This is a budget statement,
/// never a proof of non-existence.
class NotFoundError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "not_found"; }
};

/// A Newton step was requested where the Jacobian valuation does not leave
/// enough room (f(x0) not small enough, or a singular Jacobian).
class MarginError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "margin_violated"; }
};

/// Degenerate situation the library refuses to guess about.
class UnresolvedError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unresolved"; }
};

}  // namespace qlat
