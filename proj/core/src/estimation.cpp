#include "ctom/estimation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "ctom/numerics.hpp"
#include "ctom/parallel.hpp"
#include "ctom/sampling.hpp"

namespace ctom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kDeBound = std::sqrt(3.0);

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Eigen::MatrixXd coefficient_columns(const std::vector<DensityMatrix>& states) {
  if (states.empty()) throw ConfigError("CandidateGrid: at least one candidate required");
  const int d2 = states.front().dim() * states.front().dim();
  Eigen::MatrixXd coeffs(d2, states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != states.front().dim()) {
      throw DimensionError("CandidateGrid: mixed candidate dimensions");
    }
    coeffs.col(i) = to_pauli(states[i]).coeffs();
  }
  return coeffs;
}

CandidateGrid finish_grid(std::vector<DensityMatrix> states, std::string geometry) {
  CandidateGrid grid;
  grid.coeffs = coefficient_columns(states);
  grid.states = std::move(states);
  grid.log_prior =
      Eigen::VectorXd::Constant(grid.states.size(), -std::log(double(grid.states.size())));
  grid.geometry = std::move(geometry);
  return grid;
}

}  // namespace

CandidateGrid build_grid(const std::string& kind, int count, std::uint64_t seed,
                         const std::optional<DensityMatrix>& fixed_ancilla) {
  if (count < 1) throw ConfigError("build_grid: count must be >= 1");
  std::vector<DensityMatrix> states;
  states.reserve(count);
  if (kind == "HS-uniform-ball") {
    for (int i = 0; i < count; ++i) {
      Rng rng(derive_stream_seed(seed, i));
      states.push_back(hs_random(2, rng));
    }
  } else if (kind == "product-with-fixed-ancilla") {
    if (!fixed_ancilla) {
      throw ConfigError("build_grid: product grid requires a fixed ancilla state");
    }
    if (fixed_ancilla->dim() != 2) {
      throw DimensionError("build_grid: ancilla must be a single-qubit state");
    }
    for (int i = 0; i < count; ++i) {
      Rng rng(derive_stream_seed(seed, i));
      states.push_back(tensor(*fixed_ancilla, hs_random(2, rng)));
    }
  } else if (kind == "explicit") {
    throw ConfigError("build_grid: use explicit_grid() to supply candidates directly");
  } else {
    throw ConfigError("build_grid: unknown grid kind '" + kind + "'");
  }
  return finish_grid(std::move(states), kind);
}

CandidateGrid explicit_grid(std::vector<DensityMatrix> states) {
  return finish_grid(std::move(states), "explicit");
}

BatchLikelihood::BatchLikelihood(const std::vector<MeasurementRecord>& records, int threads) {
  if (records.empty()) throw ConfigError("BatchLikelihood: empty record batch");
  for (const auto& r : records) {
    if (!same_protocol(records.front(), r)) {
      throw ConfigError("BatchLikelihood: records mix measurement configurations");
    }
  }
  dim_ = records.front().control.dim();
  const int n = static_cast<int>(records.size());
  projections_.resize(n, dim_ * dim_);
  Eigen::VectorXd scales(n);
  parallel_for(
      n,
      [&](std::int64_t i) {
        const KrausPropagator kp(records[i]);
        projections_.row(i) = kp.povm_pauli_row();
        scales[i] = kp.log_scale();
      },
      threads);
  scale_sum_ = pairwise_sum({scales.data(), static_cast<std::size_t>(n)});
}

double BatchLikelihood::log_likelihood(const DensityMatrix& candidate) const {
  if (candidate.dim() != dim_) {
    throw DimensionError("BatchLikelihood: candidate dimension mismatch");
  }
  return log_likelihood(to_pauli(candidate).coeffs());
}

double BatchLikelihood::log_likelihood(const Eigen::VectorXd& pauli_coeffs) const {
  if (pauli_coeffs.size() != projections_.cols()) {
    throw DimensionError("BatchLikelihood: coefficient vector size mismatch");
  }
  Eigen::VectorXd traces = projections_ * pauli_coeffs;
  for (Eigen::Index j = 0; j < traces.size(); ++j) {
    if (!(traces[j] > 0.0)) return -kInf;
    traces[j] = std::log(traces[j]);
  }
  return scale_sum_ +
         pairwise_sum({traces.data(), static_cast<std::size_t>(traces.size())});
}

Eigen::VectorXd BatchLikelihood::grid_log_likelihood(const CandidateGrid& grid,
                                                     int threads) const {
  if (grid.dim() != dim_) throw DimensionError("BatchLikelihood: grid dimension mismatch");
  Eigen::VectorXd out(grid.size());
  parallel_for(
      grid.size(), [&](std::int64_t i) { out[i] = log_likelihood(grid.coeffs.col(i)); },
      threads);
  return out;
}

double batch_log_likelihood(const DensityMatrix& candidate,
                            const std::vector<MeasurementRecord>& records) {
  if (records.empty()) return 0.0;
  for (const auto& r : records) {
    if (!same_protocol(records.front(), r)) {
      throw ConfigError("batch_log_likelihood: records mix measurement configurations");
    }
  }
  double sum = 0.0;
  for (const auto& r : records) {
    const double ll = record_log_likelihood(candidate, r);
    if (ll == -kInf) return -kInf;
    sum += ll;
  }
  return sum;
}

Posterior posterior(std::shared_ptr<const CandidateGrid> grid,
                    const std::vector<MeasurementRecord>& records, int threads) {
  if (!grid || grid->size() == 0) throw ConfigError("posterior: nonempty grid required");
  Eigen::VectorXd lw = grid->log_prior;
  if (!records.empty()) {
    const BatchLikelihood bl(records, threads);
    lw += bl.grid_log_likelihood(*grid, threads);
  }
  const double norm = log_sum_exp(lw);
  if (norm == -kInf) {
    throw DataError("posterior: every candidate has zero likelihood (inconsistent data)");
  }
  lw.array() -= norm;
  return Posterior{std::move(grid), std::move(lw)};
}

double EstimationReport::sqrt_trace_cov() const {
  if (!bayes_cov) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(std::max(0.0, bayes_cov->trace()));
}

std::vector<double> EstimationReport::ellipsoid_radii() const {
  if (!bayes_cov) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*bayes_cov, Eigen::EigenvaluesOnly);
  std::vector<double> radii;
  radii.reserve(es.eigenvalues().size());
  for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;) {
    radii.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i])));
  }
  return radii;
}

EstimationReport bme(const Posterior& post) {
  const WallClock clock;
  const CandidateGrid& grid = *post.grid;
  const Eigen::VectorXd w = post.log_weights.array().exp();
  Eigen::VectorXd mean = grid.coeffs * w;
  mean[0] = 1.0;

  const int d2 = static_cast<int>(mean.size());
  const Eigen::MatrixXd centered =
      grid.coeffs.bottomRows(d2 - 1).colwise() - mean.tail(d2 - 1);
  Eigen::MatrixXd cov = centered * w.asDiagonal() * centered.transpose();
  cov = ((cov + cov.transpose()) / 2.0).eval();

  EstimationReport report{from_pauli(PauliCoefficients(grid.dim(), std::move(mean))), "BME"};
  report.bayes_cov = std::move(cov);
  report.wall_time_seconds = clock.seconds();
  return report;
}

EstimationReport mpbe(const Posterior& post) {
  const WallClock clock;
  Eigen::Index best = 0;
  post.log_weights.maxCoeff(&best);  // first maximum, i.e. lowest grid index
  EstimationReport report{post.grid->states[best], "MPBE"};
  report.wall_time_seconds = clock.seconds();
  return report;
}

EstimationReport mle_two_qubit(const std::vector<MeasurementRecord>& records,
                               const DeConfig& config) {
  const WallClock clock;
  if (records.empty()) {
    EstimationReport report{DensityMatrix::maximally_mixed(4), "MLE"};
    report.no_data = true;
    report.wall_time_seconds = clock.seconds();
    return report;
  }
  const BatchLikelihood bl(records, config.threads);
  if (bl.dim() != 4) throw ConfigError("mle_two_qubit: two-qubit records required");
  if (config.population < 5) throw ConfigError("mle_two_qubit: population too small");

  const int n_coeff = 15;
  const auto fitness = [&](const Eigen::VectorXd& c15) {
    Eigen::VectorXd full(16);
    full[0] = 1.0;
    full.tail(n_coeff) = c15;
    if (!check_two_qubit_positivity(PauliCoefficients(4, full)).ok) return -kInf;
    return bl.log_likelihood(full);
  };

  Eigen::VectorXd global_best;
  double global_best_fit = -kInf;

  for (int restart = 0; restart < config.restarts; ++restart) {
    Rng rng(derive_stream_seed(config.seed, restart));

    // Feasible-by-construction initialization spanning the whole state space.
    std::vector<Eigen::VectorXd> pop(config.population);
    Eigen::VectorXd fit(config.population);
    for (int i = 0; i < config.population; ++i) {
      pop[i] = to_pauli(hs_random(4, rng)).coeffs().tail(n_coeff);
    }
    parallel_for(
        config.population, [&](std::int64_t i) { fit[i] = fitness(pop[i]); },
        config.threads);

    double best_fit = fit.maxCoeff();
    int stall = 0;
    std::vector<Eigen::VectorXd> trials(config.population);
    Eigen::VectorXd trial_fit(config.population);

    for (int gen = 0; gen < config.max_generations && stall < config.stall_generations;
         ++gen) {
      for (int i = 0; i < config.population; ++i) {
        int a, b, c;
        do { a = rng.uniform_int(config.population); } while (a == i);
        do { b = rng.uniform_int(config.population); } while (b == i || b == a);
        do { c = rng.uniform_int(config.population); } while (c == i || c == a || c == b);
        const int j_forced = rng.uniform_int(n_coeff);
        Eigen::VectorXd trial = pop[i];
        for (int k = 0; k < n_coeff; ++k) {
          if (k == j_forced || rng.uniform() < config.crossover) {
            trial[k] = std::clamp(pop[a][k] + config.weight * (pop[b][k] - pop[c][k]),
                                  -kDeBound, kDeBound);
          }
        }
        trials[i] = std::move(trial);
      }
      parallel_for(
          config.population, [&](std::int64_t i) { trial_fit[i] = fitness(trials[i]); },
          config.threads);
      for (int i = 0; i < config.population; ++i) {
        if (trial_fit[i] >= fit[i]) {
          pop[i] = std::move(trials[i]);
          fit[i] = trial_fit[i];
        }
      }
      const double new_best = fit.maxCoeff();
      stall = (new_best - best_fit < config.stall_tol) ? stall + 1 : 0;
      best_fit = std::max(best_fit, new_best);
    }

    Eigen::Index best_i = 0;
    fit.maxCoeff(&best_i);
    if (fit[best_i] > global_best_fit) {
      global_best_fit = fit[best_i];
      global_best = pop[best_i];
    }
  }

  if (!(global_best_fit > -kInf)) {
    throw NumericalError("mle_two_qubit: no feasible candidate found");
  }
  Eigen::VectorXd full(16);
  full[0] = 1.0;
  full.tail(n_coeff) = global_best;
  EstimationReport report{from_pauli(PauliCoefficients(4, std::move(full))), "MLE"};
  report.records_used = static_cast<int>(records.size());
  report.wall_time_seconds = clock.seconds();
  return report;
}

PauliCoefficients linear_inversion(int dim,
                                   const std::map<std::string, ObservableTally>& tallies) {
  require_dim(dim, "linear_inversion");
  Eigen::VectorXd c(dim * dim);
  c[0] = 1.0;
  const auto& labels = nonidentity_labels(dim);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = tallies.find(labels[i]);
    if (it == tallies.end() || it->second.plus + it->second.minus <= 0) {
      throw DataError("linear_inversion: missing tally for observable '" + labels[i] + "'");
    }
    const double total = double(it->second.plus + it->second.minus);
    c[i + 1] = double(it->second.plus - it->second.minus) / total;
  }
  return PauliCoefficients(dim, std::move(c));
}

void attach_truth_metrics(EstimationReport& report, const DensityMatrix& truth) {
  if (truth.dim() != report.estimator.dim()) {
    throw DimensionError("attach_truth_metrics: truth dimension mismatch");
  }
  report.trace_distance_vs_truth = trace_distance(report.estimator, truth);
  if (report.estimator_physical) {
    report.fidelity_vs_truth = fidelity(report.estimator, truth);
  }
}

}  // namespace ctom
