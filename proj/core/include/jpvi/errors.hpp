#pragma once

#include <stdexcept>
#include <string>

namespace jpvi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative method (series, quadrature, extrapolation) ran out of budget.
class NotConverged : public Error {
 public:
  using Error::Error;
};

/// A pivot of a symmetric factorization was nonpositive.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(int index, const std::string& what) : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

/// A pivot lost too many significant bits to cancellation; the caller should
/// retry at a higher precision.
class NonFinitePivot : public Error {
 public:
  NonFinitePivot(int index, const std::string& what) : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

/// Precision escalation reached kMaxPrecisionBits without success.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at a pole of a rational function.
class PoleEvaluation : public DomainError {
 public:
  using DomainError::DomainError;
};

class ZeroDenominator : public DomainError {
 public:
  using DomainError::DomainError;
};

/// State on (or too close to) a fixed or moving singular locus of an ODE.
class SingularLocus : public DomainError {
 public:
  using DomainError::DomainError;
};

class StepUnderflow : public Error {
 public:
  using Error::Error;
};

}  // namespace jpvi
