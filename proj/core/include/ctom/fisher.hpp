#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctom/dynamics.hpp"
#include "ctom/qcore.hpp"

namespace ctom {

/// Weak-measurement-limit Fisher information for the initial-state
/// coefficients:
///   F_{E,E'} = e^{-T/2tau} / (d^2 tau) * integral_0^T a_E(t) a_{E'}(t) dt,
/// with a_E(t) = Tr(Z(t) E) and Z(t) = U(t)^dag Zhat U(t).
struct FisherMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;
  MeasurementConfig config;
  ControlSetting control;
};

/// Time integral by composite Simpson; Z(t) from the exact eigendecomposition
/// exponential per grid point. An empty label list means all non-identity
/// basis labels in canonical order.
FisherMatrix fisher_matrix(const ControlSetting& control, const MeasurementConfig& config,
                           const std::vector<std::string>& labels = {},
                           int simpson_intervals = 8192);

/// The closed form is a first-order expansion in 1/tau; flags tau < 2T.
std::optional<std::string> fisher_validity_warning(const MeasurementConfig& config);

struct CrbFloor {
  std::vector<std::string> labels;      // numerically informed labels
  Eigen::MatrixXd covariance;           // (1/N) * pseudo-inverse on that block
  std::vector<std::string> uninformed;  // labels dropped from the block
};

/// Cramer-Rao floor Cov >= (1/N) F^{-1}, restricted to the block whose
/// diagonal exceeds 1e-8 * max diagonal. Throws NumericalError when no label
/// carries information.
CrbFloor crb_floor(const FisherMatrix& fisher, int num_records);

struct ErrorEllipsoid {
  PauliCoefficients center;
  Eigen::MatrixXd covariance;
};

/// Radius sqrt(n^T C n) of the ellipsoid along a unit direction.
double ellipsoid_radius(const ErrorEllipsoid& ellipsoid, const Eigen::VectorXd& direction);

}  // namespace ctom
