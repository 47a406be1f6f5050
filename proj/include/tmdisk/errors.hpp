#pragma once

#include <stdexcept>

namespace tmdisk {

// Input violates a documented invariant (flux, determinant, domain of an
// argument). Maps to exit code 2 in the command-line tool.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The computation itself broke down: vanishing Moebius denominator, an
// integration that misses its determinant tolerance. Exit code 3.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tmdisk
