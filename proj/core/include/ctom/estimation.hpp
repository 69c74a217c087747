#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctom/dynamics.hpp"
#include "ctom/qcore.hpp"

namespace ctom {

/// Trial states for Bayesian estimation, with their Pauli coefficients cached
/// column-wise for vectorized likelihood evaluation.
struct CandidateGrid {
  std::vector<DensityMatrix> states;
  Eigen::MatrixXd coeffs;     // d^2 x K, one column per candidate
  Eigen::VectorXd log_prior;  // normalized (log-sum-exp = 0)
  std::string geometry;       // "HS-uniform-ball" | "product-with-fixed-ancilla" | "explicit"

  int size() const { return static_cast<int>(states.size()); }
  int dim() const { return states.empty() ? 0 : states.front().dim(); }
};

/// kind "HS-uniform-ball": count i.i.d. Hilbert-Schmidt single-qubit states;
/// kind "product-with-fixed-ancilla": ancilla (x) trial for each draw.
/// Candidate i draws from the stream (seed, i), so grids are reproducible
/// and independent of threading.
CandidateGrid build_grid(const std::string& kind, int count, std::uint64_t seed,
                         const std::optional<DensityMatrix>& fixed_ancilla = std::nullopt);
CandidateGrid explicit_grid(std::vector<DensityMatrix> states);

/// Record batch compiled into POVM projections: the log-likelihood of any
/// candidate is a sum of logs of dot products, no re-propagation needed.
class BatchLikelihood {
 public:
  explicit BatchLikelihood(const std::vector<MeasurementRecord>& records, int threads = 0);

  int dim() const { return dim_; }
  int num_records() const { return static_cast<int>(projections_.rows()); }

  /// Sum over records of the record log-likelihood, pairwise-accumulated in a
  /// fixed order (bit-reproducible across thread counts).
  double log_likelihood(const DensityMatrix& candidate) const;
  double log_likelihood(const Eigen::VectorXd& pauli_coeffs) const;

  /// One value per grid candidate, evaluated in parallel blocks.
  Eigen::VectorXd grid_log_likelihood(const CandidateGrid& grid, int threads = 0) const;

 private:
  int dim_ = 0;
  Eigen::MatrixXd projections_;  // N x d^2
  double scale_sum_ = 0.0;       // pairwise sum of per-record log scales
};

/// Product likelihood over records: sum of record_log_likelihood values; 0
/// for an empty batch, -inf when any record is impossible for the candidate.
double batch_log_likelihood(const DensityMatrix& candidate,
                            const std::vector<MeasurementRecord>& records);

struct Posterior {
  std::shared_ptr<const CandidateGrid> grid;
  Eigen::VectorXd log_weights;  // normalized (log-sum-exp = 0)
};

/// log_weights = log_prior + batch log-likelihood, log-sum-exp normalized.
/// Throws DataError when every candidate is impossible.
Posterior posterior(std::shared_ptr<const CandidateGrid> grid,
                    const std::vector<MeasurementRecord>& records, int threads = 0);

struct EstimationReport {
  DensityMatrix estimator;
  std::string method;  // "BME" | "MPBE" | "MLE" | "LI"
  std::optional<Eigen::MatrixXd> bayes_cov;  // over non-identity coefficients (BME)
  std::optional<double> fidelity_vs_truth;
  std::optional<double> trace_distance_vs_truth;
  int records_used = 0;
  double wall_time_seconds = 0.0;
  bool no_data = false;
  bool estimator_physical = true;

  /// sqrt(Tr Cov_BME); NaN when no Bayesian covariance is attached.
  double sqrt_trace_cov() const;
  /// Principal radii of the Bayesian error ellipsoid (sqrt eigenvalues).
  std::vector<double> ellipsoid_radii() const;
};

/// Posterior-mean state (a convex combination, hence always valid) with the
/// Bayesian covariance of the non-identity coefficients.
EstimationReport bme(const Posterior& post);

/// Candidate with maximal posterior weight; ties break to the lowest index.
EstimationReport mpbe(const Posterior& post);

struct DeConfig {
  int population = 60;
  double weight = 0.7;
  double crossover = 0.9;
  int max_generations = 400;
  int restarts = 8;            // a thorough search uses 50
  int stall_generations = 50;  // stop a restart when best stalls this long
  double stall_tol = 1e-6;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Constrained maximum likelihood over the 15 two-qubit coefficients by
/// differential evolution (rand/1/bin). Infeasible trials (failing the
/// closed-form positivity constraints) score -inf; the search space is
/// clipped to [-sqrt3, sqrt3] per coordinate. Deterministic given the seed.
EstimationReport mle_two_qubit(const std::vector<MeasurementRecord>& records,
                               const DeConfig& config = {});

struct ObservableTally {
  long plus = 0;   // outcomes with eigenvalue +1
  long minus = 0;  // outcomes with eigenvalue -1
};

/// c_i = (n_plus - n_minus) / (n_plus + n_minus) per observable. Requires a
/// nonempty tally for every non-identity basis label; no positivity
/// enforcement: the estimate can be an invalid state, which is the point of
/// keeping this baseline around.
PauliCoefficients linear_inversion(int dim, const std::map<std::string, ObservableTally>& tallies);

/// Fills fidelity/trace-distance fields when the estimator is physical
/// enough for them to be meaningful.
void attach_truth_metrics(EstimationReport& report, const DensityMatrix& truth);

}  // namespace ctom
