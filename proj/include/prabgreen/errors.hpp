#pragma once

#include <stdexcept>
#include <string>

namespace prabgreen {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A series or image sum did not meet its tail criterion within the caps.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// E12 called with parameters whose double series is not known to converge.
class DivergentParameters : public Error {
 public:
  using Error::Error;
};

// A numerator gamma hit a pole that no denominator pole cancels.
class InvalidTerm : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

// Finite-difference step would leave the integration interval.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

// Boundary and initial data violate the corner compatibility conditions.
class IncompatibleData : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace prabgreen
