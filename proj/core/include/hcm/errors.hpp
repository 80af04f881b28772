#pragma once

#include <stdexcept>
#include <string>

namespace hcm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Raised by pos_sqrt on non-Hermitian input or an eigenvalue below -tol_psd.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Invalid domain parameters (e.g. a scale factor incompatible with the kind).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// reach_index hit its iteration cap; the domain violates the reachability axiom.
class DomainUnreachableError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ControlError : public Error {
 public:
  using Error::Error;
};

class UnsupportedExponentError : public ControlError {
 public:
  using ControlError::ControlError;
};

class DivergenceError : public ControlError {
 public:
  using ControlError::ControlError;
};

/// The vanishing condition fails, so no extrapolation limit is guaranteed.
class VanishingError : public ControlError {
 public:
  using ControlError::ControlError;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double last_gap, int iterations)
      : Error(what), last_gap_(last_gap), iterations_(iterations) {}

  double last_gap() const noexcept { return last_gap_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_gap_;
  int iterations_;
};

class LinearityError : public Error {
 public:
  using Error::Error;
};

class FixtureError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcm
