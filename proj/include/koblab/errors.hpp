#pragma once

#include <stdexcept>
#include <string>

namespace koblab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters, malformed configs, dimension mismatches. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A point, curve or map image that leaves the domain it must live in. CLI exit code 3.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An optimizer, subdivision or iteration budget ran out. CLI exit code 4.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Broken internal consistency (an estimator contradicting a theorem it relies on).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace koblab
