#pragma once

#include <stdexcept>
#include <string>

namespace cellscale {

/// Input violates a documented range or invariant (exponent bounds, non-positive distance, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Network too small for the requested scaling (m < 1, n < m*l).
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cellscale
