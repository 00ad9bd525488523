#pragma once

#include <stdexcept>
#include <string>

namespace gempart {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (bad parameters, malformed input).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Index outside the range a table or weight array was built for.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A configured resource cap (enumeration size, DP size, stick count,
// series terms, simulation horizon) would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class DivergentSeries : public Error {
 public:
  using Error::Error;
};

class NonPositivePseudoSize : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// The secondary phase of a two-phase sample hit its customer cap before
// every primary table was rediscovered.
class RediscoveryTimeout : public Error {
 public:
  using Error::Error;
};

}  // namespace gempart
