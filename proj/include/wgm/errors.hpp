#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wgm {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad user input. Carries the offending field or key.
class ValidationError : public Error {
public:
  ValidationError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& message, std::vector<double> residuals)
      : NumericalError(message), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
  std::vector<double> residuals_;
};

// Raised when an operation needs a stable drift matrix and did not get one.
class StabilityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Raised when a covariance matrix violates the uncertainty principle.
class PhysicalityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace wgm
