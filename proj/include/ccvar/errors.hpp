#pragma once

#include <stdexcept>
#include <string>

namespace ccvar {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: dimensions, malformed files, contract violations. CLI exit code 1.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Request exceeds the desk-scale caps this build enforces.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not reach its stopping criterion. CLI exit code 2.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ccvar
