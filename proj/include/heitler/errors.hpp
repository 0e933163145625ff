#pragma once

#include <stdexcept>
#include <string>

namespace heitler {

/// Bad parameters or request shape (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension mismatch between operators handed to the algebra kernel.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: no steady state, non-finite propagation,
/// unconverged limit (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-form evaluator was asked for a point outside the regime it
/// describes (CLI exit code 4).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace heitler
