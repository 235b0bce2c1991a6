#pragma once

#include <stdexcept>
#include <string>

namespace cylt {

/// Base class for all library errors. `exit_code()` is the CLI status the
/// error maps to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Malformed input: non-positive sizes, bad option values, wrong mode.
class InvalidArgument : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// The iterative solve stopped at its iteration cap above the requested
/// tolerance. Carries the relative residual it reached.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  int exit_code() const noexcept override { return 3; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// A shape does not fit the container or its truncation, or an evolving
/// shape reached the cap layer.
class InfeasibleGeometry : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// The target volume is too small for the grid (fewer than 8 cells).
class ResolutionTooCoarse : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An oracle identity or acceptance check did not hold.
class VerificationFailure : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

}  // namespace cylt
