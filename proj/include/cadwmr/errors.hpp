#pragma once

#include <stdexcept>
#include <string>

namespace cadwmr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible interval (p, eta, q, r, family parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a precondition on a matrix argument (e.g. non-Hermitian input).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A floating-point quantity left its tolerated window (negative radicand, complex spectrum).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Post-measurement trace vanished.
class DegenerateMeasurementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Closed form requested for a state outside its validity class (non-X state).
class UnsupportedStateError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (normalization table, sweep flags, training config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class OptimizationError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or JSON input; the message names the offending row/column.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cadwmr
