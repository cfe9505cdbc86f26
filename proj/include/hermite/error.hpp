#pragma once

#include <stdexcept>
#include <string>

namespace hermite {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: dimension mismatch, out-of-domain parameter, malformed config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A quadrature or refinement ladder failed to reach its declared tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  // Same residual, message prefixed with context.
  NonConvergence(const std::string& context, const NonConvergence& inner)
      : Error(context + inner.what()), residual_(inner.residual_) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Requested grid or enumeration would exceed a configured memory/work budget.
class BudgetExceeded : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hermite
