#pragma once

#include <stdexcept>
#include <string>

namespace ltt {

/// Argument outside the mathematical domain of an operation (e.g. t outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Channel noise level that the flow path cannot represent (level above sigma_max).
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, double level, double sigma_max)
      : std::runtime_error(what), level_(level), sigma_max_(sigma_max) {}

  double level() const noexcept { return level_; }
  double sigma_max() const noexcept { return sigma_max_; }

 private:
  double level_;
  double sigma_max_;
};

/// Dimension or length mismatch between arguments.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// NaN/Inf produced by a numerical routine.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (IDX, checkpoint, CSV, config).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checkpoint written by an incompatible format version.
class VersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace ltt
