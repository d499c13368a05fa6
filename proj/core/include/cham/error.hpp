#pragma once

#include <stdexcept>
#include <string>

namespace cham {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter (lambda, temperature, sample count, ...) violates its
// precondition. Maps to CLI exit code 1.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Input data is invalid: non-finite entries, zero-norm rows, degenerate
// scores, mismatched domain names. Maps to CLI exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// File or wire-format problem: bad magic, truncated payload, JSON parse
// failure. Maps to CLI exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

// A factorization or solve failed where the math says it should not.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration (CLI/config file). Maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cham
