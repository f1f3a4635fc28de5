#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpptw {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes: validation errors -> 2, numerical-consistency errors -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid distribution or model parameters.
class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Argument outside the documented domain of a function.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Grid or shape mismatch between operands.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Operation called outside its stated preconditions.
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Brute-force oracle asked to enumerate beyond its size bound.
class OracleScopeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A computed quantity failed an internal consistency check (non-monotone CDF,
// ODE blow-up, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpptw
