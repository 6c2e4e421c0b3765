#pragma once

#include <stdexcept>
#include <string>

namespace kedim {

// Invalid parameters or configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Anything that goes wrong once a valid computation is underway (exit code 1).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index or value outside what the available data can answer.
class BoundsError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

// NaN / Inf produced by a numerical routine.
class NumericError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

// Time integration left the absorbing region by orders of magnitude.
class DivergenceError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

// Iterative solver ran out of iterations.
class ConvergenceError : public ComputationError {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : ComputationError(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// Internal limit reached (search region, refinement cap, ...).
class InternalError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace kedim
