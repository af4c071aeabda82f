#pragma once

#include <stdexcept>
#include <string>

namespace nhskin {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: violated precondition, malformed model, wrong dimension.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not produce a trustworthy answer.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// The point gap at the requested base energy is closed.
class GapClosedError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// Leading or trailing characteristic-polynomial coefficient vanishes.
class DegeneratePolynomialError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// <L|R> too small to define a biorthogonal density (exceptional-point vicinity).
class EpVicinityError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// Probe frequency sits on the spectrum.
class SingularProbeError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace nhskin
