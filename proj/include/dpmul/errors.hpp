#pragma once

#include <stdexcept>
#include <string>

namespace dpmul {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A matrix that must be inverted is singular or too badly conditioned.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class InsufficientSymbols : public Error {
 public:
  using Error::Error;
};

class InvalidPlan : public Error {
 public:
  using Error::Error;
};

class DegenerateWeights : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpmul
