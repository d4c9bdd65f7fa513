#pragma once

#include <stdexcept>
#include <string>

namespace techfc {

// Malformed or unusable input data (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Optimizer or special-function failure (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least-squares design matrix is rank deficient (x has no spread).
class SingularDesignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace techfc
