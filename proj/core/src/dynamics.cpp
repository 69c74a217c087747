#include "ctom/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ctom/parallel.hpp"

namespace ctom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Vector3d axis_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// Diagonal of M(r) in the computational basis. The first dim/2 entries sit in
// the +1 eigenspace of Zhat, the rest in the -1 eigenspace.
Eigen::VectorXd measurement_diagonal(double r, const MeasurementConfig& config, int dim) {
  const double pref = std::pow(config.dt / (2.0 * std::numbers::pi * config.tau), 0.25);
  const double mp = pref * std::exp(-(r - 1.0) * (r - 1.0) * config.dt / (4.0 * config.tau));
  const double mm = pref * std::exp(-(r + 1.0) * (r + 1.0) * config.dt / (4.0 * config.tau));
  Eigen::VectorXd diag(dim);
  for (int i = 0; i < dim; ++i) diag[i] = i < dim / 2 ? mp : mm;
  return diag;
}

double plus_population(const DensityMatrix& rho) {
  double p = 0.0;
  for (int i = 0; i < rho.dim() / 2; ++i) p += rho.matrix()(i, i).real();
  return std::clamp(p, 0.0, 1.0);
}

// Measurement + unitary step without renormalization; returns the trace.
double raw_step(const DensityMatrix& rho, double r, const Matrix& unitary,
                const MeasurementConfig& config, Matrix& out) {
  const Eigen::VectorXd m = measurement_diagonal(r, config, rho.dim());
  const Matrix damped = m.asDiagonal() * rho.matrix() * m.asDiagonal();
  const double tr = damped.trace().real();
  out = unitary * damped * unitary.adjoint();
  return tr;
}

}  // namespace

Eigen::Vector3d ControlSetting::axis1() const { return axis_from_angles(theta1, phi1); }
Eigen::Vector3d ControlSetting::axis2() const { return axis_from_angles(theta2, phi2); }

ControlSetting single_qubit_control(double theta, double phi, double omega,
                                    std::string label) {
  ControlSetting c;
  c.num_qubits = 1;
  c.theta1 = theta;
  c.phi1 = phi;
  c.omega1 = omega;
  c.label = std::move(label);
  validate_control(c);
  return c;
}

ControlSetting two_qubit_control(double theta1, double phi1, double omega1, double theta2,
                                 double phi2, double omega2, double g, std::string label) {
  ControlSetting c;
  c.num_qubits = 2;
  c.theta1 = theta1;
  c.phi1 = phi1;
  c.omega1 = omega1;
  c.theta2 = theta2;
  c.phi2 = phi2;
  c.omega2 = omega2;
  c.g = g;
  c.label = std::move(label);
  validate_control(c);
  return c;
}

void validate_control(const ControlSetting& control) {
  if (control.num_qubits != 1 && control.num_qubits != 2) {
    throw ConfigError("ControlSetting: num_qubits must be 1 or 2");
  }
  if (control.omega1 < 0 || control.omega2 < 0 || control.g < 0) {
    throw ConfigError("ControlSetting: rates must be non-negative");
  }
  if (control.num_qubits == 1 && (control.g != 0 || control.omega2 != 0)) {
    throw ConfigError("ControlSetting: coupling/second-qubit rate on a single qubit");
  }
}

bool same_control(const ControlSetting& a, const ControlSetting& b) {
  return a.num_qubits == b.num_qubits && a.theta1 == b.theta1 && a.phi1 == b.phi1 &&
         a.omega1 == b.omega1 && a.theta2 == b.theta2 && a.phi2 == b.phi2 &&
         a.omega2 == b.omega2 && a.g == b.g;
}

MeasurementConfig config_for_total_time(double dt, double total_time, double tau) {
  MeasurementConfig c;
  c.dt = dt;
  c.n_steps = static_cast<int>(std::llround(total_time / dt));
  c.tau = tau;
  validate_config(c);
  return c;
}

void validate_config(const MeasurementConfig& config) {
  if (!(config.dt > 0)) throw ConfigError("MeasurementConfig: dt must be positive");
  if (config.n_steps < 0) throw ConfigError("MeasurementConfig: n_steps must be >= 0");
  if (!(config.tau > 0)) throw ConfigError("MeasurementConfig: tau must be positive");
}

std::optional<std::string> config_warning(const MeasurementConfig& config) {
  if (config.dt > config.tau / 10.0) {
    return "dt = " + std::to_string(config.dt) + " is coarse relative to tau = " +
           std::to_string(config.tau) + " (expect dt <= tau/10)";
  }
  return std::nullopt;
}

bool same_protocol(const MeasurementRecord& a, const MeasurementRecord& b) {
  return a.config.dt == b.config.dt && a.config.n_steps == b.config.n_steps &&
         a.config.tau == b.config.tau && same_control(a.control, b.control);
}

Observable build_hamiltonian(const ControlSetting& control) {
  validate_control(control);
  const int dim = control.dim();
  Matrix h = Matrix::Zero(dim, dim);
  if (control.num_qubits == 1) {
    const Eigen::Vector3d n = control.axis1();
    for (int k = 0; k < 3; ++k) {
      h += 0.5 * control.omega1 * n[k] * basis_matrix(2, k + 1);
    }
  } else {
    h += 0.5 * control.g * basis_matrix(4, basis_index(4, "XX"));
    const Eigen::Vector3d n1 = control.axis1();
    const Eigen::Vector3d n2 = control.axis2();
    const std::string letters = "XYZ";
    for (int k = 0; k < 3; ++k) {
      h += 0.5 * control.omega1 * n1[k] *
           basis_matrix(4, basis_index(4, std::string(1, letters[k]) + "I"));
      h += 0.5 * control.omega2 * n2[k] *
           basis_matrix(4, basis_index(4, "I" + std::string(1, letters[k])));
    }
  }
  return Observable{dim, std::move(h), control.label.empty() ? "H" : control.label};
}

Matrix unitary_step(const Observable& hamiltonian, double dt) {
  return herm_exp_minus_i(hamiltonian.matrix, dt);
}

Matrix measurement_operator(double r, const MeasurementConfig& config, int dim) {
  require_dim(dim, "measurement_operator");
  validate_config(config);
  return measurement_diagonal(r, config, dim).cast<Complex>().asDiagonal();
}

StepResult conditioned_step(const DensityMatrix& rho, double r,
                            const Observable& hamiltonian,
                            const MeasurementConfig& config) {
  return conditioned_step(rho, r, unitary_step(hamiltonian, config.dt), config);
}

StepResult conditioned_step(const DensityMatrix& rho, double r, const Matrix& unitary,
                            const MeasurementConfig& config) {
  Matrix next;
  const double tr = raw_step(rho, r, unitary, config, next);
  if (!(tr > kDensityUnderflow)) {
    throw NumericalError("conditioned_step: record impossible for this state");
  }
  next /= tr;
  next = ((next + next.adjoint()) / 2.0).eval();
  return StepResult{DensityMatrix(std::move(next)), tr};
}

double sample_readout(const DensityMatrix& rho, const MeasurementConfig& config, Rng& rng) {
  const double p_plus = plus_population(rho);
  const double mean = rng.uniform() < p_plus ? 1.0 : -1.0;
  return rng.normal(mean, std::sqrt(config.tau / config.dt));
}

MeasurementRecord simulate_record(const DensityMatrix& rho0, const ControlSetting& control,
                                  const MeasurementConfig& config, std::uint64_t seed) {
  validate_config(config);
  if (rho0.dim() != control.dim()) {
    throw DimensionError("simulate_record: state/control dimension mismatch");
  }
  MeasurementRecord record;
  record.config = config;
  record.control = control;
  record.seed = seed;
  record.readouts.reserve(config.n_steps);

  Rng rng(seed);
  const Matrix u = unitary_step(build_hamiltonian(control), config.dt);
  DensityMatrix rho = rho0;
  for (int k = 0; k < config.n_steps; ++k) {
    const double r = sample_readout(rho, config, rng);
    record.readouts.push_back(r);
    rho = conditioned_step(rho, r, u, config).state;
  }
  return record;
}

std::vector<MeasurementRecord> simulate_records(const DensityMatrix& rho0,
                                                const ControlSetting& control,
                                                const MeasurementConfig& config, int count,
                                                std::uint64_t master_seed, int threads) {
  if (count < 0) throw ConfigError("simulate_records: negative count");
  std::vector<MeasurementRecord> records(count);
  parallel_for(
      count,
      [&](std::int64_t i) {
        records[i] = simulate_record(rho0, control, config,
                                     derive_stream_seed(master_seed, i));
      },
      threads);
  return records;
}

double record_log_likelihood(const DensityMatrix& rho0, const MeasurementRecord& record) {
  if (rho0.dim() != record.control.dim()) {
    throw DimensionError("record_log_likelihood: state/record dimension mismatch");
  }
  const Matrix u = unitary_step(build_hamiltonian(record.control), record.config.dt);
  DensityMatrix rho = rho0;
  double ll = 0.0;
  for (double r : record.readouts) {
    Matrix next;
    const double tr = raw_step(rho, r, u, record.config, next);
    if (!(tr > kDensityUnderflow)) return -kInf;
    ll += std::log(tr);
    next /= tr;
    next = ((next + next.adjoint()) / 2.0).eval();
    rho = DensityMatrix(std::move(next));
  }
  return ll;
}

KrausPropagator::KrausPropagator(const MeasurementRecord& record) {
  const int dim = record.control.dim();
  const Matrix u = unitary_step(build_hamiltonian(record.control), record.config.dt);
  Matrix op = Matrix::Identity(dim, dim);
  for (double r : record.readouts) {
    const Eigen::VectorXd m = measurement_diagonal(r, record.config, dim);
    op = u * (m.asDiagonal() * op);
    const double scale = op.cwiseAbs().maxCoeff();
    if (!(scale > 0)) throw NumericalError("KrausPropagator: operator vanished");
    op /= scale;
    log_scale_op_ += std::log(scale);
  }
  op_ = std::move(op);
  povm_ = op_.adjoint() * op_;
  povm_ = ((povm_ + povm_.adjoint()) / 2.0).eval();
}

double KrausPropagator::log_likelihood(const DensityMatrix& rho0) const {
  if (rho0.dim() != dim()) {
    throw DimensionError("KrausPropagator: state dimension mismatch");
  }
  const double tr = (povm_ * rho0.matrix()).trace().real();
  if (!(tr > 0.0)) return -kInf;
  return log_scale() + std::log(tr);
}

DensityMatrix KrausPropagator::condition(const DensityMatrix& rho0) const {
  Matrix m = op_ * rho0.matrix() * op_.adjoint();
  const double tr = m.trace().real();
  if (!(tr > kDensityUnderflow)) {
    throw NumericalError("KrausPropagator: record impossible for this state");
  }
  m /= tr;
  m = ((m + m.adjoint()) / 2.0).eval();
  return DensityMatrix(std::move(m));
}

Eigen::RowVectorXd KrausPropagator::povm_pauli_row() const {
  const int d = dim();
  Eigen::RowVectorXd row(d * d);
  for (int k = 0; k < d * d; ++k) {
    row[k] = (povm_ * basis_matrix(d, k)).trace().real() / d;
  }
  return row;
}

}  // namespace ctom
