#pragma once

#include <stdexcept>
#include <string>

namespace carlab {

/// Bad input: wrong shape, non-skew argument, exponent out of range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds what the dense/blocked representations are allowed to hold.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace carlab
