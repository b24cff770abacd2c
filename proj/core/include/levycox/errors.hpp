#pragma once

#include <stdexcept>
#include <string>

namespace levycox {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV data files, report documents).
struct ParseError : Error {
  using Error::Error;
};

/// A dataset or argument violates a documented precondition.
struct ValidationError : Error {
  using Error::Error;
};

/// A numerical procedure failed (divergent MLE, quadrature breakdown, ...).
struct NumericalError : Error {
  using Error::Error;
};

/// Invalid model, prior, or run configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// Filesystem failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace levycox
