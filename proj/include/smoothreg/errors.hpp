#pragma once

#include <stdexcept>
#include <string>

namespace smoothreg {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid model or routine parameters (kappa <= 0, nu <= 0, negative
// distances, bad exponents, ...).
struct ParameterDomainError : Error {
  using Error::Error;
};

// Two observation locations closer than the coincidence tolerance.
struct DuplicateLocationError : Error {
  using Error::Error;
};

// Covariance factorization or eigendecomposition failed, including after
// the diagonal jitter retries.
struct NotPositiveDefiniteError : Error {
  using Error::Error;
};

// Design carries no usable information (all-zero regressor, empty sums).
struct DegenerateDesignError : Error {
  using Error::Error;
};

// Normal equations are numerically singular.
struct RankDeficiencyError : Error {
  using Error::Error;
};

// A limit quantity was requested outside the regime where it exists.
struct RegimeError : Error {
  using Error::Error;
};

// Abscissae were not strictly increasing where the routine requires it.
struct InputOrderError : Error {
  using Error::Error;
};

// Malformed or inconsistent data file.
struct DataError : Error {
  using Error::Error;
};

// Malformed or inconsistent run configuration.
struct ConfigError : Error {
  using Error::Error;
};

// A column that must be standardized has (numerically) zero variance.
struct DegenerateColumnError : Error {
  using Error::Error;
};

}  // namespace smoothreg
