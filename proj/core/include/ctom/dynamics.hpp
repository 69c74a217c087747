#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctom/qcore.hpp"
#include "ctom/rng.hpp"

namespace ctom {

/// Fixed Rabi/coupling controls. Axes are stored as polar angles with the
/// convention n = (sin t cos p, sin t sin p, cos t); rates are angular
/// frequencies (a rate of 2*pi/T completes one rotation in time T).
struct ControlSetting {
  int num_qubits = 1;
  double theta1 = 0.0, phi1 = 0.0, omega1 = 0.0;  // qubit 1 (the measured one)
  double theta2 = 0.0, phi2 = 0.0, omega2 = 0.0;  // qubit 2 (two-qubit settings)
  double g = 0.0;                                 // X(x)X coupling rate
  std::string label;                              // optional setting code

  int dim() const { return num_qubits == 1 ? 2 : 4; }
  Eigen::Vector3d axis1() const;
  Eigen::Vector3d axis2() const;
};

ControlSetting single_qubit_control(double theta, double phi, double omega,
                                    std::string label = "");
ControlSetting two_qubit_control(double theta1, double phi1, double omega1,
                                 double theta2, double phi2, double omega2, double g,
                                 std::string label = "");
void validate_control(const ControlSetting& control);
bool same_control(const ControlSetting& a, const ControlSetting& b);  // label ignored

/// Discretization and measurement strength. tau is the characteristic
/// measurement time (per-step readout variance is tau/dt).
struct MeasurementConfig {
  double dt = 0.01;
  int n_steps = 200;
  double tau = 0.4;

  double total_time() const { return dt * n_steps; }
};

MeasurementConfig config_for_total_time(double dt, double total_time, double tau);
void validate_config(const MeasurementConfig& config);
/// Non-fatal advice (e.g. dt > tau/10 makes the Gaussian readout model coarse).
std::optional<std::string> config_warning(const MeasurementConfig& config);

struct MeasurementRecord {
  std::vector<double> readouts;
  MeasurementConfig config;
  ControlSetting control;
  std::uint64_t seed = 0;
};

bool same_protocol(const MeasurementRecord& a, const MeasurementRecord& b);

/// (Omega/2) n.sigma for one qubit;
/// (g/2) XX + (Omega1/2)(n1.sigma)(x)I + (Omega2/2) I(x)(n2.sigma) for two.
Observable build_hamiltonian(const ControlSetting& control);

/// U = exp(-i H dt), exact via eigendecomposition.
Matrix unitary_step(const Observable& hamiltonian, double dt);

/// M(r) = (dt/2 pi tau)^(1/4) exp(-(r - Zhat)^2 dt / 4 tau), diagonal in the
/// computational basis with entries split over the +-1 eigenspaces of Zhat.
Matrix measurement_operator(double r, const MeasurementConfig& config, int dim);

struct StepResult {
  DensityMatrix state;
  double prob_density = 0.0;  // one-step conditional density p(r | rho)
};

/// Applies M(r) then U, renormalizes, and reports p(r|rho) = Tr[M^2 rho].
/// Throws NumericalError if the record is impossible for this state.
StepResult conditioned_step(const DensityMatrix& rho, double r,
                            const Observable& hamiltonian,
                            const MeasurementConfig& config);
StepResult conditioned_step(const DensityMatrix& rho, double r, const Matrix& unitary,
                            const MeasurementConfig& config);

/// Draws a readout from the exact two-Gaussian mixture implied by M(r):
/// means +-1, variance tau/dt, weights = populations of the Zhat eigenspaces.
double sample_readout(const DensityMatrix& rho, const MeasurementConfig& config, Rng& rng);

/// One stochastic record: alternate sample_readout / conditioned_step for
/// n_steps. Deterministic given the seed.
MeasurementRecord simulate_record(const DensityMatrix& rho0, const ControlSetting& control,
                                  const MeasurementConfig& config, std::uint64_t seed);

/// Batch of records with per-record streams derived from (master_seed, index);
/// output is independent of the worker count.
std::vector<MeasurementRecord> simulate_records(const DensityMatrix& rho0,
                                                const ControlSetting& control,
                                                const MeasurementConfig& config, int count,
                                                std::uint64_t master_seed, int threads = 0);

/// ln Tr[M_R^dag M_R rho0], accumulated step by step in log space.
/// Returns -inf when some step density underflows (impossible record).
double record_log_likelihood(const DensityMatrix& rho0, const MeasurementRecord& record);

/// The composed record operator M_R = U M(r_n) ... U M(r_1), stored with a
/// separate log scale factor so products over thousands of steps do not
/// underflow. Evaluating the record likelihood of a candidate through this
/// object is mathematically identical to re-propagating the candidate, at a
/// tiny fraction of the cost.
class KrausPropagator {
 public:
  explicit KrausPropagator(const MeasurementRecord& record);

  int dim() const { return static_cast<int>(op_.rows()); }

  /// ln Tr[M_R^dag M_R rho0]; -inf if the trace vanishes.
  double log_likelihood(const DensityMatrix& rho0) const;

  /// Conditioned final state M_R rho M_R^dag / Tr[...].
  DensityMatrix condition(const DensityMatrix& rho0) const;

  /// Row p with p_k = Tr(E~ E_k) / d over the full basis, so that the record
  /// log-likelihood of a candidate with coefficients c is
  /// log_scale() + ln(p . c).
  Eigen::RowVectorXd povm_pauli_row() const;

  /// ln of the scale squared factored out of the POVM element.
  double log_scale() const { return 2.0 * log_scale_op_; }

 private:
  Matrix op_;          // scaled M_R
  Matrix povm_;        // op^dag op
  double log_scale_op_ = 0.0;
};

}  // namespace ctom
