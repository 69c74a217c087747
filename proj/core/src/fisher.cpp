#include "ctom/fisher.hpp"

#include <cmath>

#include "ctom/numerics.hpp"

namespace ctom {

FisherMatrix fisher_matrix(const ControlSetting& control, const MeasurementConfig& config,
                           const std::vector<std::string>& labels, int simpson_intervals) {
  validate_config(config);
  const int dim = control.dim();
  FisherMatrix out;
  out.labels = labels.empty() ? nonidentity_labels(dim) : labels;
  out.config = config;
  out.control = control;

  const int n_labels = static_cast<int>(out.labels.size());
  std::vector<Matrix> ops;
  ops.reserve(n_labels);
  for (const auto& label : out.labels) {
    ops.push_back(basis_matrix(dim, basis_index(dim, label)));
  }

  const double total_time = config.total_time();
  const Matrix h = build_hamiltonian(control).matrix;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Matrix& vec = es.eigenvectors();
  const Eigen::VectorXd& eval = es.eigenvalues();
  const Matrix zhat = measured_observable_matrix(dim);

  const Eigen::VectorXd w = simpson_weights(simpson_intervals, total_time);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n_labels, n_labels);
  Eigen::VectorXd a(n_labels);
  for (int k = 0; k <= simpson_intervals; ++k) {
    const double t = total_time * k / simpson_intervals;
    Eigen::VectorXcd phases(eval.size());
    for (Eigen::Index i = 0; i < eval.size(); ++i) {
      phases[i] = std::exp(Complex(0.0, -eval[i] * t));
    }
    const Matrix u = vec * phases.asDiagonal() * vec.adjoint();
    const Matrix zt = u.adjoint() * zhat * u;
    for (int i = 0; i < n_labels; ++i) a[i] = (zt * ops[i]).trace().real();
    f.selfadjointView<Eigen::Lower>().rankUpdate(a, w[k]);
  }
  f = f.selfadjointView<Eigen::Lower>();

  const double prefactor =
      std::exp(-total_time / (2.0 * config.tau)) / (dim * dim * config.tau);
  out.entries = prefactor * f;
  return out;
}

std::optional<std::string> fisher_validity_warning(const MeasurementConfig& config) {
  if (config.tau < 2.0 * config.total_time()) {
    return "tau = " + std::to_string(config.tau) +
           " is outside the weak-measurement regime (tau >= 2T recommended); "
           "the closed form is first order in 1/tau";
  }
  return std::nullopt;
}

CrbFloor crb_floor(const FisherMatrix& fisher, int num_records) {
  if (num_records < 1) throw ConfigError("crb_floor: num_records must be >= 1");
  const int n = static_cast<int>(fisher.labels.size());
  const double max_diag = fisher.entries.diagonal().maxCoeff();
  if (!(max_diag > 0)) {
    throw NumericalError("crb_floor: no label carries information");
  }

  CrbFloor out;
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    if (fisher.entries(i, i) > 1e-8 * max_diag) {
      kept.push_back(i);
      out.labels.push_back(fisher.labels[i]);
    } else {
      out.uninformed.push_back(fisher.labels[i]);
    }
  }

  const int m = static_cast<int>(kept.size());
  Eigen::MatrixXd block(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      block(i, j) = fisher.entries(kept[i], kept[j]);

  // Pseudo-inverse of the (symmetric PSD) accessible block.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
  const double cutoff = es.eigenvalues().cwiseAbs().maxCoeff() * 1e-12;
  Eigen::VectorXd inv(m);
  for (int i = 0; i < m; ++i) {
    inv[i] = es.eigenvalues()[i] > cutoff ? 1.0 / es.eigenvalues()[i] : 0.0;
  }
  out.covariance =
      (es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose()) /
      static_cast<double>(num_records);
  return out;
}

double ellipsoid_radius(const ErrorEllipsoid& ellipsoid, const Eigen::VectorXd& direction) {
  if (direction.size() != ellipsoid.covariance.rows()) {
    throw DimensionError("ellipsoid_radius: direction size mismatch");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw ConfigError("ellipsoid_radius: direction must be a unit vector");
  }
  const double r2 = direction.dot(ellipsoid.covariance * direction);
  return std::sqrt(std::max(0.0, r2));
}

}  // namespace ctom
