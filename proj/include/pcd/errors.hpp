#pragma once

#include <stdexcept>
#include <string>

namespace pcd {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid data, arguments, files, or schemas. CLI exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown (factorization failure, non-finite results). CLI exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcd
