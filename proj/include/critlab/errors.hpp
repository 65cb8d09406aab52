#pragma once

#include <stdexcept>
#include <string>

namespace critlab {

// Base of every error the library throws. The CLI maps the families below to
// exit codes: ParameterError/DomainError -> 2, NumericalError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Family parameter outside its admissible range.
class ParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A structural invariant (pair conditions, germ conditions) does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Budget exhaustion, overflow, precision loss, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
 public:
  OverflowError(int level, const std::string& what)
      : NumericalError(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

}  // namespace critlab
