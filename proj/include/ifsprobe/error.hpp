#pragma once

#include <stdexcept>
#include <string>

namespace ifsprobe {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or broken preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ResolutionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptySetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AlphabetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvertibilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegeneracyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MultiplierError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotAContractionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical searches that ran out of room. These are "probe" failures: the
// inputs were fine but the computation did not reach a conclusion.
class ProbeError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public ProbeError {
 public:
  ConstructionError(const std::string& what, double uncovered_fraction)
      : ProbeError(what), uncovered_fraction_(uncovered_fraction) {}
  double uncovered_fraction() const { return uncovered_fraction_; }

 private:
  double uncovered_fraction_;
};

class ConvergenceError : public ProbeError {
 public:
  ConvergenceError(const std::string& what, double last_distance)
      : ProbeError(what), last_distance_(last_distance) {}
  double last_distance() const { return last_distance_; }

 private:
  double last_distance_;
};

class HorizonError : public ProbeError {
 public:
  using ProbeError::ProbeError;
};

class BudgetError : public ProbeError {
 public:
  BudgetError(const std::string& what, double partial_uncovered_fraction)
      : ProbeError(what), partial_uncovered_fraction_(partial_uncovered_fraction) {}
  double partial_uncovered_fraction() const { return partial_uncovered_fraction_; }

 private:
  double partial_uncovered_fraction_;
};

}  // namespace ifsprobe
