#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ctom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Validity tolerances, collected in one place and sized so that accumulated
// floating error over a 200-step propagation never false-fails a check.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kConstraintFloor = -1e-9;
inline constexpr double kDensityUnderflow = 1e-300;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration, unknown codes, precondition violations. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unsupported or mismatched matrix dimensions.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Malformed files, mismatched record sets, inconsistent data. CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Underflow, degenerate information, failed numerical routines. CLI exit code 4.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(int dim, const std::string& where) {
  if (dim != 2 && dim != 4) {
    throw DimensionError(where + ": unsupported dimension " + std::to_string(dim) +
                         " (expected 2 or 4)");
  }
}

}  // namespace ctom
