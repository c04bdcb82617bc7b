#pragma once

#include <stdexcept>
#include <string>

namespace dephase {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Broken precondition or postcondition (non-Hermitian input, bad mode/gauge pair).
struct ContractViolation : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct InstabilityError : Error {
  InstabilityError(const std::string& msg, double lambda, double omega_sq)
      : Error(msg), lambda(lambda), omega_sq(omega_sq) {}
  double lambda;
  double omega_sq;
};

struct DegenerateTrackingError : Error {
  using Error::Error;
};

struct FitQualityError : Error {
  FitQualityError(const std::string& msg, double residual) : Error(msg), residual(residual) {}
  double residual;
};

struct StepSizeError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace dephase
