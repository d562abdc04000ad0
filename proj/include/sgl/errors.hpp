#pragma once

#include <stdexcept>
#include <string>

namespace sgl {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: non-positive epsilon, quadrature size too small, bad grids.
struct ConfigError : Error {
  using Error::Error;
};

/// Shape or angular-layout mismatch between datasets, bases, or functions.
struct LayoutError : Error {
  using Error::Error;
};

/// Malformed or truncated files (bad magic, version, short reads).
struct FormatError : Error {
  using Error::Error;
};

/// Numerical failures: isolated points (vanishing degree), eigensolver breakdown.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace sgl
