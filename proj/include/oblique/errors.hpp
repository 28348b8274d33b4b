#pragma once

#include <stdexcept>
#include <string>

namespace oblique {

// Dimension or structural mismatch between arguments.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation only defined for tabular (finite-state) inputs.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Caller violated a documented contract (e.g. non-sequential stream for ETD).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& what, double condition)
      : NumericalError(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class NonErgodicError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Sample whose Δφ has (numerically) zero norm; O²TD cannot weight it.
class DegenerateSampleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Invalid experiment configuration or command-line input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Filesystem failure; message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oblique
