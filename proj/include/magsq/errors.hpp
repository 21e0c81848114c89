#pragma once

#include <stdexcept>
#include <string>

namespace magsq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function (negative variance, ω ≤ 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matrix or vector shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A drift matrix is not Hurwitz, or couplings violate G₊ < G₋.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double margin)
      : Error(what), margin_(margin) {}

  /// Largest real part of the offending drift spectrum (NaN when not applicable).
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// The adaptive integrator could not make progress.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A covariance matrix is not a valid Gaussian state.
class StateError : public Error {
 public:
  using Error::Error;
};

/// A marginal covariance matrix is singular.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or malformed configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace magsq
