#pragma once

#include <stdexcept>
#include <string>

namespace lrt {

// Base class for every exception thrown by this library. Catching lrt::Error
// is enough to handle any failure the library reports deliberately.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// An argument lies outside a function's mathematical domain,
// e.g. log_gamma(-1).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A structural or configuration precondition is violated: mismatched shapes,
// empty partitions, invalid flag combinations, bad option values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data could not be parsed (malformed CSV or JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

// The sample is too small for the requested computation; the message names
// the violated bound.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A standardization's logarithm arguments left their domain, i.e. the
// configuration is outside the asymptotic regime the formula supports.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// A standardization scale collapsed to (numerical) zero, so no finite
// z-score exists. Raised instead of returning an infinite result.
class DegenerateScaleError : public Error {
 public:
  using Error::Error;
};

// Cholesky factorization of a matrix that must be positive definite broke
// down; `pivot` is the zero-based index of the failing pivot (-1 if the
// factorization failed without locating one).
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& message, int failing_pivot)
      : Error(message), pivot(failing_pivot) {}
  int pivot;
};

// A design matrix does not have full column rank.
class SingularDesignError : public Error {
 public:
  using Error::Error;
};

// A data-derived matrix required by a statistic is singular; the message
// recommends the sample-size bound that restores full rank.
class RankError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrt
