#pragma once

#include <stdexcept>
#include <string>

namespace pasurf {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed scene, unknown names, inadmissible parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: evaluation outside a function's domain, non-finite
/// values, singular metrics or immersions.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace pasurf
