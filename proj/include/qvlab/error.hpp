#pragma once

#include <stdexcept>
#include <string>

namespace qvlab {

/// Mismatched Q or ambient dimension between arguments.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain where an operation is defined.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct EmptyIntervalError : DomainError {
  using DomainError::DomainError;
};

struct UnsupportedCodimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a log-log fit has no signal (zero energy, empty flag set).
struct UndefinedExponentError : std::domain_error {
  using std::domain_error::domain_error;
};

struct AliasingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace qvlab

namespace qvlab {

struct UndefinedDimensionError : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace qvlab
