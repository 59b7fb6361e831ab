#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dancer {

/// Base of every failure raised by the library. Callers that only need to
/// distinguish "bad input" from "numerics did not work out" can catch
/// InvalidArgument and NumericalError respectively.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. the
/// singular Helmholtz solution at r = 0, q outside the admissible window).
class DomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::vector<double> history = {})
      : Error(what), history_(std::move(history)) {}

  /// Residual or iterate history collected before the failure, if any.
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

class NoBracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllPosedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContractViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DecompositionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AsymptoticsViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dancer
