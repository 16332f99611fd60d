#pragma once

#include <stdexcept>
#include <string>

namespace ridel {

/// Malformed or out-of-domain input (bad probabilities, dimension mismatch,
/// non-positive cost parameter, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative routine ran out of iterations before certifying its result.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual, long iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

}  // namespace ridel
