#pragma once

#include <stdexcept>
#include <string>

namespace heunpulse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (|z| beyond the radius, phi at a
/// boundary, invalid parameter set, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Argument hits a pole of the function being evaluated.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A closed-form limit does not exist (e.g. Gauss sum with Re(c-a-b) <= 0).
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double tail_estimate)
      : Error(what), tail_estimate_(tail_estimate) {}
  double tail_estimate() const noexcept { return tail_estimate_; }

 private:
  double tail_estimate_;
};

/// Adaptive integration failed before reaching its target.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double reached)
      : Error(what), reached_(reached) {}
  /// Last abscissa the integrator reached successfully.
  double reached() const noexcept { return reached_; }

 private:
  double reached_;
};

/// Requested operation is not available for this input kind.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace heunpulse
