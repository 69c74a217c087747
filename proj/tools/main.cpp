#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

using namespace ctom;
using namespace ctom::cli;

// Flags shared by simulate/fisher that override the experiment document.
struct DocFlags {
  std::string config_path;
  std::optional<std::string> setting;
  std::optional<double> omega, g, theta, phi, theta2, phi2;
  std::optional<int> qubits;
  std::optional<std::string> truth, ancilla;
  std::optional<int> records;
  std::optional<double> dt, total_time, tau, tau_over_t;
  std::optional<std::uint64_t> seed;
};

void add_doc_flags(CLI::App* cmd, DocFlags& f) {
  cmd->add_option("--config", f.config_path, "experiment config JSON file");
  cmd->add_option("--setting", f.setting, "control setting code (e.g. XYZ, 0+XYZ, XY+YZ)");
  cmd->add_option("--omega", f.omega, "Rabi rate in units of 2pi/T");
  cmd->add_option("--g", f.g, "coupling rate in units of 2pi/T");
  cmd->add_option("--theta", f.theta, "qubit-1 polar angle (explicit-axis control)");
  cmd->add_option("--phi", f.phi, "qubit-1 azimuthal angle");
  cmd->add_option("--theta2", f.theta2, "qubit-2 polar angle");
  cmd->add_option("--phi2", f.phi2, "qubit-2 azimuthal angle");
  cmd->add_option("--qubits", f.qubits, "1 or 2 (explicit-axis control)");
  cmd->add_option("--truth", f.truth, "truth state spec");
  cmd->add_option("--ancilla", f.ancilla, "ancilla state spec (remote protocols)");
  cmd->add_option("--records", f.records, "number of records");
  cmd->add_option("--dt", f.dt, "time step");
  cmd->add_option("--total-time", f.total_time, "total measurement time T");
  cmd->add_option("--tau", f.tau, "characteristic measurement time");
  cmd->add_option("--tau-over-T", f.tau_over_t, "tau as a fraction of T");
  cmd->add_option("--seed", f.seed, "master seed");
}

nlohmann::json build_doc(const DocFlags& f) {
  nlohmann::json doc = nlohmann::json::object();
  if (!f.config_path.empty()) doc = load_json_file(f.config_path);
  if (f.setting) doc["control"]["setting"] = *f.setting;
  if (f.omega) {
    doc["control"]["omega_2pi_over_T"] = *f.omega;
    doc["control"].erase("omega_rad_per_time");
  }
  if (f.g) {
    doc["control"]["g_2pi_over_T"] = *f.g;
    doc["control"].erase("g_rad_per_time");
  }
  if (f.theta) doc["control"]["theta1"] = *f.theta;
  if (f.phi) doc["control"]["phi1"] = *f.phi;
  if (f.theta2) doc["control"]["theta2"] = *f.theta2;
  if (f.phi2) doc["control"]["phi2"] = *f.phi2;
  if (f.qubits) doc["control"]["num_qubits"] = *f.qubits;
  if (f.truth) doc["truth"] = *f.truth;
  if (f.ancilla) doc["ancilla"] = *f.ancilla;
  if (f.records) doc["num_records"] = *f.records;
  if (f.dt) doc["measurement"]["dt"] = *f.dt;
  if (f.total_time) doc["measurement"]["total_time"] = *f.total_time;
  if (f.tau) {
    doc["measurement"]["tau"] = *f.tau;
    doc["measurement"].erase("tau_over_T");
  }
  if (f.tau_over_t) {
    doc["measurement"]["tau_over_T"] = *f.tau_over_t;
    doc["measurement"].erase("tau");
  }
  if (f.seed) doc["seed"] = *f.seed;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctom: continuous weak-measurement qubit tomography"};
  app.require_subcommand(1);

  DocFlags sim_flags;
  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "generate stochastic measurement records");
  add_doc_flags(sim_cmd, sim_flags);
  sim_cmd->add_option("--out", sim.out, "output record file");
  sim_cmd->add_option("--csv", sim.csv, "also export records as CSV");
  sim_cmd->add_option("--threads", sim.threads, "worker threads (0 = auto)");

  EstimateOptions est;
  auto* est_cmd = app.add_subcommand("estimate", "reconstruct a state from records");
  est_cmd->add_option("--records", est.records_path, "record file from `simulate`");
  est_cmd->add_option("--method", est.method, "bme | mpbe | mle | li");
  est_cmd->add_option("--grid-size", est.grid_size, "Bayesian candidate count");
  est_cmd->add_option("--grid-kind", est.grid_kind,
                      "HS-uniform-ball | product-with-fixed-ancilla");
  est_cmd->add_option("--grid-file", est.grid_file,
                      "explicit candidate list (JSON array of states)");
  est_cmd->add_option("--ancilla", est.ancilla_spec, "ancilla state spec");
  est_cmd->add_option("--truth", est.truth_spec, "truth state spec (enables fidelity)");
  est_cmd->add_option("--de-restarts", est.de_restarts, "differential evolution restarts");
  est_cmd->add_option("--de-population", est.de_population, "DE population size");
  est_cmd->add_option("--de-generations", est.de_generations, "DE generation cap");
  est_cmd->add_option("--li-shots", est.li_shots, "projective shots per observable (li)");
  est_cmd->add_option("--seed", est.seed, "grid / optimizer seed");
  est_cmd->add_option("--out", est.out, "report JSON path");
  est_cmd->add_option("--csv", est.csv, "per-coefficient CSV path");
  est_cmd->add_option("--threads", est.threads, "worker threads (0 = auto)");

  DocFlags fish_flags;
  FisherOptions fish;
  auto* fish_cmd = app.add_subcommand("fisher", "weak-limit Fisher information analysis");
  add_doc_flags(fish_cmd, fish_flags);
  fish_cmd->add_option("--grid", fish.simpson_intervals, "Simpson intervals");
  fish_cmd->add_option("--crb-records", fish.crb_records, "N for the Cramer-Rao floor");
  fish_cmd->add_option("--sweep", fish.sweep, "theta|omega|g|tau=lo:hi:count");
  fish_cmd->add_option("--out", fish.out, "output prefix (.json/.csv)");

  ControlsOptions ctl;
  auto* ctl_cmd = app.add_subcommand("controls", "commutator table and reachability");
  ctl_cmd->add_option("--setting", ctl.setting, "control setting code");
  ctl_cmd->add_option("--omega", ctl.omega_2pi_over_t, "Rabi rate in units of 2pi/T");
  ctl_cmd->add_option("--g", ctl.g_2pi_over_t, "coupling rate in units of 2pi/T");
  ctl_cmd->add_option("--total-time", ctl.total_time, "total measurement time T");
  ctl_cmd->add_option("--depth", ctl.max_depth, "commutator closure depth");
  ctl_cmd->add_option("--json", ctl.json_out, "machine-readable output path");

  CatalogOptions cat;
  auto* cat_cmd = app.add_subcommand("catalog", "built-in test-state catalogs");
  cat_cmd->add_option("--name", cat.name, "catalog name");
  cat_cmd->add_option("--out", cat.out_dir, "directory for state JSON files");
  cat_cmd->add_flag("--list", cat.list, "list catalog names");

  BenchOptions bench;
  std::string bench_config;
  auto* bench_cmd = app.add_subcommand("bench", "sweep experiments and tabulate errors");
  bench_cmd->add_option("--config", bench_config, "sweep config JSON")->required();
  bench_cmd->add_option("--out", bench.out, "output prefix (_runs.csv/_summary.csv)");
  bench_cmd->add_option("--max-runs", bench.max_runs, "refuse sweeps larger than this");
  bench_cmd->add_option("--threads", bench.threads, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim_cmd->parsed()) {
      sim.doc = build_doc(sim_flags);
      return run_simulate(sim);
    }
    if (est_cmd->parsed()) return run_estimate(est);
    if (fish_cmd->parsed()) {
      fish.doc = build_doc(fish_flags);
      return run_fisher(fish);
    }
    if (ctl_cmd->parsed()) return run_controls(ctl);
    if (cat_cmd->parsed()) return run_catalog(cat);
    if (bench_cmd->parsed()) {
      bench.doc = load_json_file(bench_config);
      return run_bench(bench);
    }
  } catch (const ctom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ctom::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const ctom::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
