#pragma once

#include <stdexcept>
#include <string>

namespace ppha {

// Base for every error raised by the library. The CLI maps each subclass
// onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sequence is too short for the requested stencil or level count.
class LengthError : public Error {
 public:
  using Error::Error;
};

// A boundary policy cannot be applied to the given data.
class PolicyError : public Error {
 public:
  using Error::Error;
};

// Input data could not be parsed or contains non-finite values.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration (unknown names, bad ranges).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppha
