#pragma once

#include <stdexcept>
#include <string>

namespace cavcool {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
  using Error::Error;
};

class DegreeOverflow : public Error {
  using Error::Error;
};

class ClosureError : public Error {
  using Error::Error;
};

class DivisionByZero : public Error {
  using Error::Error;
};

/// Raised when a linear steady-state problem has no unique solution.
/// At eta = 0 this is the expected outcome: n2 is conserved.
class SingularSystem : public Error {
  using Error::Error;
};

class StepUnderflow : public Error {
  using Error::Error;
};

class NonPositiveRate : public Error {
  using Error::Error;
};

class DimensionOverflow : public Error {
  using Error::Error;
};

class CutoffTooSmall : public Error {
  using Error::Error;
};

/// The truncated Fock space was too small for the populations reached.
class CutoffSaturation : public Error {
  using Error::Error;
};

}  // namespace cavcool
