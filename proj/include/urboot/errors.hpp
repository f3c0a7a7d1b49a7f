#pragma once

#include <stdexcept>
#include <string>

namespace urboot {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument contract violation (bad trend degree,
/// bad bandwidth, malformed experiment spec, conflicting options).
struct ConfigError : Error {
  using Error::Error;
};

/// Faulty input data (malformed CSV, non-finite values, series too short).
struct DataError : Error {
  using Error::Error;
};

/// Numerical degeneracy detected while computing.
struct NumericalError : Error {
  using Error::Error;
};

/// Regressor matrix singular to working precision.
struct RankDeficient final : NumericalError {
  using NumericalError::NumericalError;
};

/// Sum of squared lagged levels is zero, the autoregressive fit is undefined.
struct DegenerateSeries final : NumericalError {
  using NumericalError::NumericalError;
};

/// Residual variance is zero, the studentized statistic is undefined.
struct ZeroResidualVariance final : NumericalError {
  using NumericalError::NumericalError;
};

/// Too few observations for the requested fit.
struct InsufficientData final : DataError {
  using DataError::DataError;
};

/// Every candidate lag order had zero residual variance or a singular design.
struct DegenerateSigma final : NumericalError {
  using NumericalError::NumericalError;
};

/// More than one percent of bootstrap replications failed.
struct DegenerateBootstrap final : NumericalError {
  using NumericalError::NumericalError;
};

/// Recoloring recursion produced non-finite values.
struct UnstableRecoloring final : NumericalError {
  using NumericalError::NumericalError;
};

/// Multiplier covariance is not positive definite.
struct NonPsdCovariance final : NumericalError {
  using NumericalError::NumericalError;
};

/// CSV parse failure; remembers the offending 1-based line number.
struct CsvError final : DataError {
  CsvError(const std::string& message, long line_number)
      : DataError(message), line(line_number) {}
  long line;
};

}  // namespace urboot
