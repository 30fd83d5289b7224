#pragma once

#include <stdexcept>
#include <cstddef>
#include <string>

namespace fbm {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters valid in principle but outside what the implementation supports
/// (e.g. 2F1 outside the Euler-integral domain).
class UnsupportedDomainError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Operation requested for a Hurst index outside its asymptotic regime.
class RegimeError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Malformed user input (files, flags). line is 1-based, 0 when not tied to
/// a line.
class InputError : public DomainError {
public:
  InputError(const std::string& what, std::size_t line = 0) : DomainError(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A quadrature did not reach its tolerance. Carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

/// Covariance matrix not positive semidefinite beyond the jitter policy.
class DegeneracyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Least-squares power-law fit is degenerate or of poor quality.
class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace fbm
