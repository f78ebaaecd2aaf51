#pragma once

#include <stdexcept>
#include <string>

namespace winkler {

/// Invalid material, geometric or load input. Maps to CLI exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested operation does not apply to the (gamma, delta) regime of the
/// stack. Maps to CLI exit code 3.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factorization breakdown or a similar numerical failure. Maps to exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace winkler
