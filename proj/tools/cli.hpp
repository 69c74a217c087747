#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctom/controls.hpp"
#include "ctom/dynamics.hpp"
#include "ctom/estimation.hpp"
#include "ctom/qcore.hpp"

namespace ctom::cli {

/// State specs accepted on the command line and in config files:
///   catalog:NAME:INDEX       entry of a built-in catalog
///   bloch:X,Y,Z              single-qubit Bloch vector
///   hs-random:DIM[:SEED]     Hilbert-Schmidt random draw
///   mixed:DIM                maximally mixed
///   file:PATH (or a path)    state JSON file {dim, pauli}
DensityMatrix resolve_state_spec(const std::string& spec, std::uint64_t default_seed);

/// One experiment, fully resolved from a JSON document. Rates given in
/// *_2pi_over_T units are multiplied by 2 pi / total_time.
struct ExperimentSpec {
  ControlSetting control;
  MeasurementConfig config;
  std::optional<DensityMatrix> truth;          // same dimension as the control
  std::optional<DensityMatrix> truth_unknown;  // single-qubit truth before tensoring
  std::optional<DensityMatrix> ancilla;
  int num_records = 2000;
  std::uint64_t seed = 1;

  std::string method = "bme";
  int grid_size = 10000;
  std::string grid_kind;  // defaulted from the record dimension when empty
  std::string grid_file;  // explicit candidate list (JSON array of states)
  DeConfig de;
  bool resample_grid = false;
  int li_shots = 1000;
};

ExperimentSpec parse_experiment(const nlohmann::json& doc);
nlohmann::json load_json_file(const std::filesystem::path& path);

struct SimulateOptions {
  nlohmann::json doc;  // experiment document (config file merged with flags)
  std::string out = "records.ctom";
  std::string csv;
  int threads = 0;
  bool quiet = false;
};
int run_simulate(const SimulateOptions& opt);

struct EstimateOptions {
  std::string records_path;
  std::string method = "bme";
  int grid_size = 10000;
  std::string grid_kind;
  std::string grid_file;
  std::string ancilla_spec;
  std::string truth_spec;
  int de_restarts = 8;
  int de_population = 60;
  int de_generations = 400;
  std::uint64_t seed = 1;
  int li_shots = 1000;
  std::string out = "report.json";
  std::string csv;
  int threads = 0;
  bool quiet = false;
};
int run_estimate(const EstimateOptions& opt);

struct FisherOptions {
  nlohmann::json doc;      // control + measurement document
  int simpson_intervals = 8192;
  int crb_records = 1000;
  std::string sweep;       // "param=lo:hi:count" over theta|omega|g|tau
  std::string out = "fisher";
  bool quiet = false;
};
int run_fisher(const FisherOptions& opt);

struct ControlsOptions {
  std::string setting = "XY+YZ";
  double omega_2pi_over_t = 1.5;
  double g_2pi_over_t = 1.5;
  double total_time = 2.0;
  int max_depth = 6;
  std::string json_out;
  bool quiet = false;
};
int run_controls(const ControlsOptions& opt);

struct CatalogOptions {
  std::string name;
  std::string out_dir;
  bool list = false;
  bool quiet = false;
};
int run_catalog(const CatalogOptions& opt);

struct BenchOptions {
  nlohmann::json doc;  // {"experiment": ..., "sweep": [...], "repetitions": n}
  std::string out = "bench";
  long max_runs = 2000;
  int threads = 0;
  bool quiet = false;
};
int run_bench(const BenchOptions& opt);

/// Per-run estimation outcome used by bench and estimate.
struct RunMetrics {
  EstimationReport report;
  std::string grid_kind_used;
  std::optional<double> fidelity;           // full-state fidelity when defined
  std::optional<double> unknown_fidelity;   // remote protocols
  std::optional<double> trace_dist;
  Eigen::VectorXd abs_errors;               // per-coefficient |estimate - truth|
};

/// Runs the configured estimator against a record batch.
RunMetrics run_estimation(const ExperimentSpec& spec,
                          const std::vector<MeasurementRecord>& records,
                          std::uint64_t grid_seed, int threads);

}  // namespace ctom::cli
