#pragma once

#include <stdexcept>
#include <string>

namespace pseudogas {

/// Base of every error raised by the library. `what()` is a single line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (sizes, ranges, unknown options).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An input or intermediate quantity left the domain where an equation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Bose denominator e^{βω} − s·z (or e^{βε} − s) is nonpositive.
class FugacityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The real part of the 2D scattering denominator is nonpositive, so the
/// principal arctan/log branch of the two-body kernel is not continuous.
class BranchError : public DomainError {
 public:
  BranchError(const std::string& what, int row = -1, int col = -1)
      : DomainError(what), row_(row), col_(col) {}
  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }

 private:
  int row_;
  int col_;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class NoRoot : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace pseudogas
