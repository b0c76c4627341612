#pragma once

#include <stdexcept>
#include <string>

namespace mott {

// Invalid input: malformed configuration, mismatched basis, bad parameter.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested Hilbert space is too large to enumerate.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Iterative eigensolver ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Requested tunneling energy lies above the maximum of t0(sigma).
class BranchLimitError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mott
