#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "ctom/fisher.hpp"
#include "ctom/numerics.hpp"
#include "ctom/parallel.hpp"
#include "ctom/record_io.hpp"
#include "ctom/sampling.hpp"
#include "ctom/state_io.hpp"

namespace ctom::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  os.precision(12);
  return os;
}

DensityMatrix parse_state_value(const nlohmann::json& v, std::uint64_t default_seed) {
  if (v.is_string()) return resolve_state_spec(v.get<std::string>(), default_seed);
  if (v.is_object()) return state_from_json(v.dump());
  throw ConfigError("state must be a spec string or a {dim, pauli} object");
}

void require_valid_state(const DensityMatrix& rho, const std::string& what) {
  if (!rho.is_valid()) throw ConfigError(what + " is not a valid (positive) state");
}

}  // namespace

DensityMatrix resolve_state_spec(const std::string& spec, std::uint64_t default_seed) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw ConfigError("empty state spec");
  const std::string& kind = parts[0];
  if (kind == "catalog") {
    if (parts.size() != 3) throw ConfigError("expected catalog:NAME:INDEX, got '" + spec + "'");
    return builtin_catalog(parts[1]).at(static_cast<int>(to_double(parts[2], "catalog index")));
  }
  if (kind == "bloch") {
    if (parts.size() != 2) throw ConfigError("expected bloch:X,Y,Z, got '" + spec + "'");
    const auto xyz = split(parts[1], ',');
    if (xyz.size() != 3) throw ConfigError("expected bloch:X,Y,Z, got '" + spec + "'");
    const DensityMatrix rho = DensityMatrix::from_bloch(to_double(xyz[0], "bloch x"),
                                                        to_double(xyz[1], "bloch y"),
                                                        to_double(xyz[2], "bloch z"));
    require_valid_state(rho, "bloch state '" + spec + "'");
    return rho;
  }
  if (kind == "hs-random") {
    const int dim = parts.size() > 1 ? static_cast<int>(to_double(parts[1], "dimension")) : 2;
    const std::uint64_t seed =
        parts.size() > 2 ? static_cast<std::uint64_t>(to_double(parts[2], "seed"))
                         : default_seed;
    Rng rng(seed);
    return hs_random(dim, rng);
  }
  if (kind == "mixed") {
    const int dim = parts.size() > 1 ? static_cast<int>(to_double(parts[1], "dimension")) : 2;
    return DensityMatrix::maximally_mixed(dim);
  }
  if (kind == "file") {
    if (parts.size() < 2) throw ConfigError("expected file:PATH");
    return read_state_json(spec.substr(5));
  }
  if (spec.find('/') != std::string::npos || spec.ends_with(".json")) {
    return read_state_json(spec);
  }
  throw ConfigError("unrecognized state spec '" + spec + "'");
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open config file '" + path.string() + "'");
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config parse error in '" + path.string() + "': " + e.what());
  }
}

ExperimentSpec parse_experiment(const nlohmann::json& doc) {
  ExperimentSpec spec;

  const nlohmann::json meas = doc.value("measurement", nlohmann::json::object());
  const double dt = meas.value("dt", 0.01);
  const double total_time = meas.value("total_time", 2.0);
  const double tau = meas.contains("tau") ? meas["tau"].get<double>()
                                          : meas.value("tau_over_T", 0.2) * total_time;
  spec.config = config_for_total_time(dt, total_time, tau);

  const nlohmann::json ctrl = doc.value("control", nlohmann::json::object());
  const double unit = total_time > 0 ? kTwoPi / total_time : 0.0;
  const auto rate = [&](const char* cycles_key, const char* abs_key, double cycles_default) {
    if (ctrl.contains(abs_key)) return ctrl[abs_key].get<double>();
    return ctrl.value(cycles_key, cycles_default) * unit;
  };
  if (ctrl.contains("setting")) {
    const std::string code = ctrl["setting"].get<std::string>();
    const bool two_qubit = code.find('+') != std::string::npos;
    spec.control = named_setting(code, rate("omega_2pi_over_T", "omega_rad_per_time", 1.5),
                                 rate("g_2pi_over_T", "g_rad_per_time", two_qubit ? 1.5 : 0.0));
  } else {
    const int num_qubits = ctrl.value("num_qubits", 1);
    const double omega = rate("omega_2pi_over_T", "omega_rad_per_time", 1.5);
    const double theta1 = ctrl.value("theta1", std::numbers::pi / 4);
    const double phi1 = ctrl.value("phi1", std::numbers::pi / 4);
    if (num_qubits == 1) {
      spec.control = single_qubit_control(theta1, phi1, omega);
    } else {
      spec.control = two_qubit_control(
          theta1, phi1, ctrl.value("omega1_2pi_over_T", omega / unit) * unit,
          ctrl.value("theta2", std::numbers::pi / 4), ctrl.value("phi2", std::numbers::pi / 4),
          ctrl.value("omega2_2pi_over_T", omega / unit) * unit,
          rate("g_2pi_over_T", "g_rad_per_time", 1.5));
    }
  }

  spec.num_records = doc.value("num_records", 2000);
  spec.seed = doc.value("seed", std::uint64_t{1});

  if (doc.contains("ancilla")) {
    spec.ancilla = parse_state_value(doc["ancilla"], derive_stream_seed(spec.seed, 0xA));
    if (spec.ancilla->dim() != 2) throw ConfigError("ancilla must be a single-qubit state");
    require_valid_state(*spec.ancilla, "ancilla");
  }
  if (doc.contains("truth")) {
    DensityMatrix t = parse_state_value(doc["truth"], derive_stream_seed(spec.seed, 0xB));
    require_valid_state(t, "truth");
    if (t.dim() == spec.control.dim()) {
      spec.truth = std::move(t);
    } else if (t.dim() == 2 && spec.control.dim() == 4 && spec.ancilla) {
      spec.truth = tensor(*spec.ancilla, t);
      spec.truth_unknown = std::move(t);
    } else {
      throw ConfigError(
          "truth dimension does not match the control (two-qubit runs with a "
          "single-qubit truth need an 'ancilla')");
    }
  }

  const nlohmann::json est = doc.value("estimation", nlohmann::json::object());
  spec.method = est.value("method", "bme");
  spec.grid_size = est.value("grid_size", 10000);
  spec.grid_kind = est.value("grid_kind", "");
  spec.grid_file = est.value("grid_file", "");
  spec.de.restarts = est.value("de_restarts", 8);
  spec.de.population = est.value("de_population", 60);
  spec.de.max_generations = est.value("de_generations", 400);
  spec.de.seed = est.value("de_seed", spec.seed);
  spec.resample_grid = est.value("resample_grid", false);
  spec.li_shots = est.value("li_shots", 1000);
  return spec;
}

namespace {

std::map<std::string, ObservableTally> synthesize_li_tallies(const DensityMatrix& truth,
                                                             int shots_per_observable,
                                                             std::uint64_t seed) {
  const int dim = truth.dim();
  // One strong readout per shot: sign(r) is the projective outcome up to an
  // exponentially small confusion probability.
  const MeasurementConfig strong{0.01, 1, 0.01 / 25.0};
  Eigen::SelfAdjointEigenSolver<Matrix> z_es(measured_observable_matrix(dim));
  std::map<std::string, ObservableTally> tallies;
  int index = 0;
  for (const auto& label : nonidentity_labels(dim)) {
    Eigen::SelfAdjointEigenSolver<Matrix> p_es(basis_matrix(dim, basis_index(dim, label)));
    const Matrix v = z_es.eigenvectors() * p_es.eigenvectors().adjoint();
    Matrix rotated = v * truth.matrix() * v.adjoint();
    rotated = ((rotated + rotated.adjoint()) / 2.0).eval();
    const DensityMatrix rho(std::move(rotated));
    Rng rng(derive_stream_seed(seed, index++));
    ObservableTally tally;
    for (int s = 0; s < shots_per_observable; ++s) {
      (sample_readout(rho, strong, rng) >= 0 ? tally.plus : tally.minus)++;
    }
    tallies[label] = tally;
  }
  return tallies;
}

std::vector<DensityMatrix> read_state_list(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open grid file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("grid file parse error: " + std::string(e.what()));
  }
  if (j.is_object()) j = nlohmann::json::array({j});
  if (!j.is_array() || j.empty()) throw DataError("grid file must hold a state or a list");
  std::vector<DensityMatrix> states;
  for (const auto& item : j) states.push_back(state_from_json(item.dump()));
  return states;
}

}  // namespace

RunMetrics run_estimation(const ExperimentSpec& spec,
                          const std::vector<MeasurementRecord>& records,
                          std::uint64_t grid_seed, int threads) {
  const int dim = records.empty() ? spec.control.dim() : records.front().control.dim();
  EstimationReport report{DensityMatrix::maximally_mixed(dim), "none"};

  std::string grid_kind_used;
  if (spec.method == "bme" || spec.method == "mpbe") {
    std::shared_ptr<const CandidateGrid> grid;
    if (!spec.grid_file.empty()) {
      grid = std::make_shared<const CandidateGrid>(explicit_grid(read_state_list(spec.grid_file)));
    } else {
      std::string kind = spec.grid_kind;
      if (kind.empty()) kind = dim == 2 ? "HS-uniform-ball" : "product-with-fixed-ancilla";
      if (kind == "product-with-fixed-ancilla" && !spec.ancilla) {
        throw ConfigError("grid kind '" + kind + "' requires an ancilla state");
      }
      grid = std::make_shared<const CandidateGrid>(
          build_grid(kind, spec.grid_size, grid_seed, spec.ancilla));
    }
    grid_kind_used = grid->geometry;
    const Posterior post = posterior(std::move(grid), records, threads);
    report = spec.method == "bme" ? bme(post) : mpbe(post);
    report.records_used = static_cast<int>(records.size());
  } else if (spec.method == "mle") {
    if (dim != 4) {
      throw ConfigError("method 'mle' needs two-qubit records (use bme/mpbe for one qubit)");
    }
    DeConfig de = spec.de;
    de.threads = threads;
    report = mle_two_qubit(records, de);
  } else if (spec.method == "li") {
    if (!spec.truth) {
      throw ConfigError("method 'li' synthesizes projective tallies and needs a truth state");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto tallies = synthesize_li_tallies(*spec.truth, spec.li_shots,
                                               derive_stream_seed(spec.seed, 0x11));
    const PauliCoefficients coeffs = linear_inversion(dim, tallies);
    report = EstimationReport{from_pauli(coeffs), "LI"};
    report.estimator_physical = is_physical(coeffs);
    report.records_used = 0;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    throw ConfigError("unknown estimation method '" + spec.method + "'");
  }

  RunMetrics metrics{std::move(report), grid_kind_used};
  if (spec.truth) {
    attach_truth_metrics(metrics.report, *spec.truth);
    metrics.fidelity = metrics.report.fidelity_vs_truth;
    metrics.trace_dist = metrics.report.trace_distance_vs_truth;
    if (spec.truth_unknown && dim == 4 && metrics.report.estimator_physical) {
      metrics.unknown_fidelity =
          fidelity(trace_out_first_qubit(metrics.report.estimator), *spec.truth_unknown);
    }
    const Eigen::VectorXd est = to_pauli(metrics.report.estimator).coeffs();
    const Eigen::VectorXd tru = to_pauli(*spec.truth).coeffs();
    metrics.abs_errors = (est - tru).cwiseAbs().tail(dim * dim - 1);
  }
  return metrics;
}

namespace {

nlohmann::json state_json(const DensityMatrix& rho) {
  return nlohmann::json::parse(state_to_json(rho));
}

nlohmann::json metrics_to_json(const RunMetrics& m, const std::vector<std::string>& warnings) {
  const auto& r = m.report;
  nlohmann::json j;
  j["method"] = r.method;
  j["dim"] = r.estimator.dim();
  j["estimator"] = state_json(r.estimator);
  j["estimator_physical"] = r.estimator_physical;
  j["records_used"] = r.records_used;
  j["wall_time_seconds"] = r.wall_time_seconds;
  j["no_data"] = r.no_data;
  if (r.bayes_cov) {
    std::vector<std::vector<double>> cov;
    for (Eigen::Index i = 0; i < r.bayes_cov->rows(); ++i) {
      cov.emplace_back(r.bayes_cov->row(i).begin(), r.bayes_cov->row(i).end());
    }
    j["bayes_cov"] = cov;
    j["sqrt_trace_cov"] = r.sqrt_trace_cov();
    j["ellipsoid_radii"] = r.ellipsoid_radii();
  }
  if (m.fidelity) j["fidelity"] = *m.fidelity;
  if (m.unknown_fidelity) j["unknown_qubit_fidelity"] = *m.unknown_fidelity;
  if (m.trace_dist) j["trace_distance"] = *m.trace_dist;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

void write_coefficient_csv(const std::filesystem::path& path, const RunMetrics& m,
                           const std::optional<DensityMatrix>& truth,
                           const std::string& grid_kind) {
  const int dim = m.report.estimator.dim();
  const Eigen::VectorXd est = to_pauli(m.report.estimator).coeffs();
  std::optional<Eigen::VectorXd> tru;
  if (truth) tru = to_pauli(*truth).coeffs();
  auto os = open_out(path);
  os << "label,estimate";
  if (tru) os << ",truth,abs_error";
  const bool product = grid_kind == "product-with-fixed-ancilla";
  if (product) os << ",fixed_by_ancilla";
  os << "\n";
  const auto& labels = basis_labels(dim);
  for (int i = 1; i < dim * dim; ++i) {
    os << labels[i] << "," << est[i];
    if (tru) os << "," << (*tru)[i] << "," << std::abs(est[i] - (*tru)[i]);
    if (product) os << "," << (labels[i][1] == 'I' ? 1 : 0);
    os << "\n";
  }
}

}  // namespace

int run_simulate(const SimulateOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentSpec spec = parse_experiment(opt.doc);
  if (!spec.truth) throw ConfigError("simulate needs a 'truth' state");
  if (spec.num_records < 1) throw ConfigError("simulate needs num_records >= 1");

  if (const auto warn = config_warning(spec.config)) std::cerr << "warning: " << *warn << "\n";

  const auto records = simulate_records(*spec.truth, spec.control, spec.config,
                                        spec.num_records, spec.seed, opt.threads);
  write_records(opt.out, records);
  if (!opt.csv.empty()) write_records_csv(opt.csv, records);

  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& rec : records) {
    for (double r : rec.readouts) sum += r;
    count += rec.readouts.size();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!opt.quiet) {
    std::cout << "simulated " << records.size() << " records (" << spec.config.n_steps
              << " steps, dt=" << spec.config.dt << ", tau=" << spec.config.tau
              << "): mean readout " << (count ? sum / count : 0.0) << ", wall "
              << std::fixed << std::setprecision(2) << wall << "s -> " << opt.out << "\n";
  }
  return 0;
}

int run_estimate(const EstimateOptions& opt) {
  ExperimentSpec spec;
  std::vector<MeasurementRecord> records;
  if (!opt.records_path.empty()) {
    records = read_records(opt.records_path);
    if (!records.empty()) {
      spec.control = records.front().control;
      spec.config = records.front().config;
    }
  } else if (opt.method != "li") {
    throw ConfigError("estimate needs --records (except --method li)");
  }
  spec.method = opt.method;
  spec.grid_size = opt.grid_size;
  spec.grid_kind = opt.grid_kind;
  spec.grid_file = opt.grid_file;
  spec.seed = opt.seed;
  spec.de.restarts = opt.de_restarts;
  spec.de.population = opt.de_population;
  spec.de.max_generations = opt.de_generations;
  spec.de.seed = opt.seed;
  spec.li_shots = opt.li_shots;
  if (!opt.ancilla_spec.empty()) {
    spec.ancilla = resolve_state_spec(opt.ancilla_spec, derive_stream_seed(opt.seed, 0xA));
  }
  if (!opt.truth_spec.empty()) {
    DensityMatrix t = resolve_state_spec(opt.truth_spec, derive_stream_seed(opt.seed, 0xB));
    const int dim = records.empty() ? t.dim() : records.front().control.dim();
    if (t.dim() == dim) {
      spec.truth = std::move(t);
    } else if (t.dim() == 2 && dim == 4 && spec.ancilla) {
      spec.truth = tensor(*spec.ancilla, t);
      spec.truth_unknown = std::move(t);
    } else {
      throw ConfigError("truth dimension does not match the records (remote runs need --ancilla)");
    }
  }

  std::vector<std::string> warnings;
  if (!records.empty()) {
    if (const auto warn = config_warning(records.front().config)) warnings.push_back(*warn);
  }
  const RunMetrics metrics =
      run_estimation(spec, records, derive_stream_seed(opt.seed, 0xC), opt.threads);

  const nlohmann::json j = metrics_to_json(metrics, warnings);
  auto os = open_out(opt.out);
  os << j.dump(2) << "\n";
  os.close();
  if (!opt.csv.empty()) {
    write_coefficient_csv(opt.csv, metrics, spec.truth, metrics.grid_kind_used);
  }
  if (!opt.quiet) {
    std::cout << metrics.report.method << " estimate from " << records.size() << " records";
    if (metrics.fidelity) std::cout << ", fidelity " << *metrics.fidelity;
    if (metrics.unknown_fidelity)
      std::cout << ", unknown-qubit fidelity " << *metrics.unknown_fidelity;
    std::cout << ", wall " << std::fixed << std::setprecision(2)
              << metrics.report.wall_time_seconds << "s -> " << opt.out << "\n";
  }
  return 0;
}

int run_fisher(const FisherOptions& opt) {
  const ExperimentSpec spec = parse_experiment(opt.doc);
  const auto warn = fisher_validity_warning(spec.config);
  if (warn && !opt.quiet) std::cerr << "warning: " << *warn << "\n";

  if (!opt.sweep.empty()) {
    const auto eq = opt.sweep.find('=');
    if (eq == std::string::npos) throw ConfigError("expected --sweep PARAM=lo:hi:count");
    const std::string param = opt.sweep.substr(0, eq);
    const auto range = split(opt.sweep.substr(eq + 1), ':');
    if (range.size() != 3) throw ConfigError("expected --sweep PARAM=lo:hi:count");
    const double lo = to_double(range[0], "sweep lo"), hi = to_double(range[1], "sweep hi");
    const int count = static_cast<int>(to_double(range[2], "sweep count"));
    if (count < 2) throw ConfigError("sweep needs at least 2 points");

    const auto& labels = nonidentity_labels(spec.control.dim());
    auto os = open_out(opt.out + ".csv");
    os << "param,value";
    for (const auto& l : labels) os << ",F_" << l;
    os << "\n";
    for (int k = 0; k < count; ++k) {
      const double v = lo + (hi - lo) * k / (count - 1);
      nlohmann::json doc = opt.doc;
      if (param == "theta") {
        if (doc.contains("control") && doc["control"].contains("setting")) {
          throw ConfigError("theta sweeps need an explicit-angle control, not a setting code");
        }
        doc["control"]["theta1"] = v;
      } else if (param == "omega") {
        doc["control"]["omega_2pi_over_T"] = v;
        doc["control"].erase("omega_rad_per_time");
      } else if (param == "g") {
        doc["control"]["g_2pi_over_T"] = v;
        doc["control"].erase("g_rad_per_time");
      } else if (param == "tau") {
        doc["measurement"]["tau"] = v;
        doc["measurement"].erase("tau_over_T");
      } else {
        throw ConfigError("unknown sweep parameter '" + param + "'");
      }
      const ExperimentSpec point = parse_experiment(doc);
      const auto fm = fisher_matrix(point.control, point.config, {}, opt.simpson_intervals);
      os << param << "," << v;
      for (Eigen::Index i = 0; i < fm.entries.rows(); ++i) os << "," << fm.entries(i, i);
      os << "\n";
    }
    if (!opt.quiet) std::cout << "fisher sweep -> " << opt.out << ".csv\n";
    return 0;
  }

  const auto fm = fisher_matrix(spec.control, spec.config, {}, opt.simpson_intervals);
  const auto floor = crb_floor(fm, opt.crb_records);

  nlohmann::json j;
  j["labels"] = fm.labels;
  std::vector<std::vector<double>> entries;
  for (Eigen::Index i = 0; i < fm.entries.rows(); ++i) {
    entries.emplace_back(fm.entries.row(i).begin(), fm.entries.row(i).end());
  }
  j["matrix"] = entries;
  j["crb"]["labels"] = floor.labels;
  j["crb"]["uninformed"] = floor.uninformed;
  std::vector<std::vector<double>> cov;
  for (Eigen::Index i = 0; i < floor.covariance.rows(); ++i) {
    cov.emplace_back(floor.covariance.row(i).begin(), floor.covariance.row(i).end());
  }
  j["crb"]["covariance"] = cov;
  j["crb"]["num_records"] = opt.crb_records;
  if (warn) j["warnings"] = std::vector<std::string>{*warn};

  auto os = open_out(opt.out + ".json");
  os << j.dump(2) << "\n";
  os.close();

  auto csv = open_out(opt.out + ".csv");
  csv << "label,fisher_diagonal,crb_variance\n";
  for (std::size_t i = 0; i < fm.labels.size(); ++i) {
    csv << fm.labels[i] << "," << fm.entries(i, i) << ",";
    const auto it = std::find(floor.labels.begin(), floor.labels.end(), fm.labels[i]);
    if (it != floor.labels.end()) {
      const auto k = it - floor.labels.begin();
      csv << floor.covariance(k, k);
    }
    csv << "\n";
  }
  if (!opt.quiet) std::cout << "fisher matrix -> " << opt.out << ".json, " << opt.out << ".csv\n";
  return 0;
}

int run_controls(const ControlsOptions& opt) {
  const double unit = kTwoPi / opt.total_time;
  const ControlSetting control =
      named_setting(opt.setting, opt.omega_2pi_over_t * unit,
                    opt.setting.find('+') != std::string::npos ? opt.g_2pi_over_t * unit : 0.0);
  const int dim = control.dim();
  const auto table = commutator_table(dim, candidate_hamiltonian_terms(dim));
  const auto active = hamiltonian_term_labels(control);
  const auto reach = reachability(control, opt.max_depth);

  if (!opt.quiet) {
    const int w = dim == 2 ? 4 : 5;
    std::cout << "commutator table (" << (dim == 2 ? "one qubit" : "two qubits") << ")\n";
    std::cout << std::setw(w) << "";
    for (const auto& t : table.ham_terms) std::cout << std::setw(w) << t;
    std::cout << "\n";
    for (std::size_t i = 0; i < table.observables.size(); ++i) {
      std::cout << std::setw(w) << table.observables[i];
      for (const auto& e : table.entries[i]) std::cout << std::setw(w) << e;
      std::cout << "\n";
    }
    std::cout << "\nsetting " << opt.setting << " (omega=" << opt.omega_2pi_over_t;
    if (dim == 4) std::cout << ", g=" << opt.g_2pi_over_t;
    std::cout << " in 2pi/T): active terms:";
    for (const auto& t : active) std::cout << " " << t;
    std::cout << "\nreachable into " << measured_observable_label(dim) << ":\n";
    int max_depth = 0;
    for (const auto& [label, d] : reach.depth) max_depth = std::max(max_depth, d);
    for (int d = 0; d <= max_depth; ++d) {
      std::cout << "  depth " << d << ":";
      for (const auto& label : reach.accessible) {
        if (reach.depth.at(label) == d) std::cout << " " << label;
      }
      std::cout << "\n";
    }
    std::cout << "not reachable:";
    bool any = false;
    for (const auto& label : nonidentity_labels(dim)) {
      if (!reach.contains(label)) {
        std::cout << " " << label;
        any = true;
      }
    }
    if (!any) std::cout << " (none)";
    std::cout << "\n";
  }

  if (!opt.json_out.empty()) {
    nlohmann::json j;
    j["setting"] = opt.setting;
    j["observables"] = table.observables;
    j["ham_terms"] = table.ham_terms;
    j["entries"] = table.entries;
    j["active_terms"] = active;
    j["measured"] = measured_observable_label(dim);
    nlohmann::json depths = nlohmann::json::object();
    for (const auto& [label, d] : reach.depth) depths[label] = d;
    j["reachability"] = depths;
    auto os = open_out(opt.json_out);
    os << j.dump(2) << "\n";
  }
  return 0;
}

int run_catalog(const CatalogOptions& opt) {
  if (opt.list || opt.name.empty()) {
    for (const auto& name : catalog_names()) {
      const auto cat = builtin_catalog(name);
      std::cout << name << " (" << cat.size() << " states)\n";
    }
    return 0;
  }
  const auto cat = builtin_catalog(opt.name);
  for (int i = 0; i < cat.size(); ++i) {
    if (!opt.quiet) {
      std::cout << opt.name << "[" << i << "] " << cat.states[i].first << "\n";
    }
    if (!opt.out_dir.empty()) {
      std::filesystem::create_directories(opt.out_dir);
      std::ostringstream name;
      name << opt.name << "_" << std::setw(2) << std::setfill('0') << i << ".json";
      write_state_json(std::filesystem::path(opt.out_dir) / name.str(), cat.at(i));
    }
  }
  if (!opt.out_dir.empty() && !opt.quiet) {
    std::cout << cat.size() << " states -> " << opt.out_dir << "\n";
  }
  return 0;
}

namespace {

void set_sweep_param(nlohmann::json& doc, const std::string& param, const nlohmann::json& v) {
  if (param == "omega_2pi_over_T" || param == "g_2pi_over_T") {
    doc["control"][param] = v;
  } else if (param == "tau") {
    doc["measurement"]["tau"] = v;
    doc["measurement"].erase("tau_over_T");
  } else if (param == "tau_over_T") {
    doc["measurement"]["tau_over_T"] = v;
    doc["measurement"].erase("tau");
  } else if (param == "total_time") {
    doc["measurement"]["total_time"] = v;
  } else if (param == "num_records") {
    doc["num_records"] = v;
  } else if (param == "setting") {
    doc["control"]["setting"] = v;
  } else if (param == "truth") {
    doc["truth"] = v;
  } else {
    throw ConfigError("unknown sweep parameter '" + param + "'");
  }
}

std::string json_scalar_to_string(const nlohmann::json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

int run_bench(const BenchOptions& opt) {
  if (!opt.doc.contains("experiment")) throw ConfigError("bench config needs 'experiment'");
  const nlohmann::json base = opt.doc["experiment"];
  const nlohmann::json sweep = opt.doc.value("sweep", nlohmann::json::array());
  const int reps = opt.doc.value("repetitions", 10);
  if (reps < 1) throw ConfigError("bench needs repetitions >= 1");

  std::vector<std::string> params;
  std::vector<std::vector<nlohmann::json>> values;
  long points = 1;
  for (const auto& axis : sweep) {
    params.push_back(axis.at("param").get<std::string>());
    values.emplace_back(axis.at("values").begin(), axis.at("values").end());
    if (values.back().empty()) throw ConfigError("sweep axis '" + params.back() + "' is empty");
    points *= static_cast<long>(values.back().size());
  }
  const long total = points * reps;
  if (total > opt.max_runs) {
    throw ConfigError("sweep would run " + std::to_string(points) + " points x " +
                      std::to_string(reps) + " repetitions = " + std::to_string(total) +
                      " experiments, over the --max-runs budget of " +
                      std::to_string(opt.max_runs));
  }

  std::vector<std::string> labels;  // fixed by the first point
  std::ofstream runs, summary;
  const auto t0 = std::chrono::steady_clock::now();

  for (long p = 0; p < points; ++p) {
    nlohmann::json doc = base;
    std::vector<std::string> point_values;
    long rem = p;
    for (std::size_t a = 0; a < params.size(); ++a) {
      const auto& vals = values[a];
      const nlohmann::json& v = vals[rem % vals.size()];
      rem /= static_cast<long>(vals.size());
      set_sweep_param(doc, params[a], v);
      point_values.push_back(json_scalar_to_string(v));
    }
    const ExperimentSpec spec = parse_experiment(doc);
    if (!spec.truth) throw ConfigError("bench experiments need a 'truth' state");

    if (labels.empty()) {
      labels = nonidentity_labels(spec.control.dim());
      runs = open_out(opt.out + "_runs.csv");
      runs << "point";
      for (const auto& name : params) runs << "," << name;
      runs << ",rep,fidelity,unknown_qubit_fidelity,trace_distance,sqrt_trace_cov";
      for (const auto& l : labels) runs << ",err_" << l;
      runs << "\n";
      summary = open_out(opt.out + "_summary.csv");
      summary << "point";
      for (const auto& name : params) summary << "," << name;
      summary << ",repetitions,mean_fidelity,sd_fidelity,mean_sqrt_trace_cov";
      for (const auto& l : labels) summary << ",rmse_" << l;
      summary << "\n";
    } else if (static_cast<int>(labels.size()) != spec.control.dim() * spec.control.dim() - 1) {
      throw ConfigError("bench sweep mixes one- and two-qubit settings");
    }

    const std::uint64_t point_master = derive_stream_seed(spec.seed, 7000 + p);
    const std::uint64_t fixed_grid_seed = derive_stream_seed(point_master, 424242);

    std::vector<double> fits;
    std::vector<double> covs;
    Eigen::VectorXd sq_err = Eigen::VectorXd::Zero(labels.size());
    for (int rep = 0; rep < reps; ++rep) {
      const auto records = simulate_records(*spec.truth, spec.control, spec.config,
                                            spec.num_records,
                                            derive_stream_seed(point_master, rep), opt.threads);
      const std::uint64_t grid_seed =
          spec.resample_grid ? derive_stream_seed(point_master, 50000 + rep) : fixed_grid_seed;
      const RunMetrics m = run_estimation(spec, records, grid_seed, opt.threads);

      runs << p;
      for (const auto& v : point_values) runs << "," << v;
      runs << "," << rep;
      runs << "," << (m.fidelity ? std::to_string(*m.fidelity) : std::string());
      runs << ","
           << (m.unknown_fidelity ? std::to_string(*m.unknown_fidelity) : std::string());
      runs << "," << (m.trace_dist ? std::to_string(*m.trace_dist) : std::string());
      const double stc = m.report.sqrt_trace_cov();
      runs << "," << (std::isnan(stc) ? std::string() : std::to_string(stc));
      for (Eigen::Index i = 0; i < m.abs_errors.size(); ++i) runs << "," << m.abs_errors[i];
      runs << "\n";

      if (m.fidelity) fits.push_back(*m.fidelity);
      if (!std::isnan(stc)) covs.push_back(stc);
      sq_err += m.abs_errors.cwiseAbs2();
    }

    double mean_f = 0, sd_f = 0, mean_cov = 0;
    for (double f : fits) mean_f += f;
    if (!fits.empty()) mean_f /= fits.size();
    for (double f : fits) sd_f += (f - mean_f) * (f - mean_f);
    if (fits.size() > 1) sd_f = std::sqrt(sd_f / (fits.size() - 1));
    for (double c : covs) mean_cov += c;
    if (!covs.empty()) mean_cov /= covs.size();

    summary << p;
    for (const auto& v : point_values) summary << "," << v;
    summary << "," << reps << "," << mean_f << "," << sd_f << "," << mean_cov;
    for (Eigen::Index i = 0; i < sq_err.size(); ++i) {
      summary << "," << std::sqrt(sq_err[i] / reps);
    }
    summary << "\n";
    if (!opt.quiet) {
      std::cout << "point " << (p + 1) << "/" << points << " done (mean fidelity " << mean_f
                << ")\n";
    }
  }
  if (!opt.quiet) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << total << " runs in " << std::fixed << std::setprecision(1) << wall
              << "s -> " << opt.out << "_runs.csv, " << opt.out << "_summary.csv\n";
  }
  return 0;
}

}  // namespace ctom::cli
