#include "ctom/controls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ctom {

namespace {

constexpr double kZeroTol = 1e-12;

// Label of the unique basis element proportional to [term, obs], or "0".
std::string commutator_label(int dim, const Matrix& term, const Matrix& obs) {
  const Matrix c = term * obs - obs * term;
  if (c.cwiseAbs().maxCoeff() < kZeroTol) return "0";
  int hit = -1;
  for (int k = 0; k < dim * dim; ++k) {
    const double overlap = std::abs((basis_matrix(dim, k).adjoint() * c).trace()) / dim;
    if (overlap > kZeroTol) {
      if (hit >= 0) {
        throw Error("commutator_table: commutator not proportional to one basis element");
      }
      hit = k;
    }
  }
  if (hit < 0) throw Error("commutator_table: nonzero commutator with no basis overlap");
  return basis_labels(dim)[hit];
}

struct AxisSpec {
  double theta;
  double phi;
  bool driven;
};

AxisSpec parse_axis_code(const std::string& code) {
  const double quarter = std::numbers::pi / 4.0;
  const double half = std::numbers::pi / 2.0;
  if (code == "0") return {0.0, 0.0, false};
  if (code == "X") return {half, 0.0, true};
  if (code == "Y") return {half, half, true};
  if (code == "Z") return {0.0, 0.0, true};
  if (code == "XY") return {half, quarter, true};
  if (code == "YZ") return {quarter, half, true};
  if (code == "XZ") return {quarter, 0.0, true};
  if (code == "XYZ") return {quarter, quarter, true};
  throw ConfigError("named_setting: unknown axis code '" + code + "'");
}

}  // namespace

CommutatorTable commutator_table(int dim, const std::vector<std::string>& ham_terms) {
  require_dim(dim, "commutator_table");
  CommutatorTable table;
  table.dim = dim;
  table.observables = nonidentity_labels(dim);
  table.ham_terms = ham_terms;
  table.entries.resize(table.observables.size());
  for (std::size_t i = 0; i < table.observables.size(); ++i) {
    const Matrix& obs = basis_matrix(dim, basis_index(dim, table.observables[i]));
    for (const auto& term_label : ham_terms) {
      const Matrix& term = basis_matrix(dim, basis_index(dim, term_label));
      table.entries[i].push_back(commutator_label(dim, term, obs));
    }
  }
  return table;
}

ReachabilitySet reachability(const ControlSetting& control, int max_depth) {
  if (max_depth < 1) throw ConfigError("reachability: max_depth must be >= 1");
  const int dim = control.dim();
  const auto terms = hamiltonian_term_labels(control);
  const auto table = commutator_table(dim, terms);

  ReachabilitySet set;
  const std::string measured = measured_observable_label(dim);
  set.depth[measured] = 0;

  // entries[i][j] = [term_j, obs_i]; obs_i joins once that lands on a member.
  for (int depth = 1; depth <= max_depth; ++depth) {
    bool grew = false;
    for (std::size_t i = 0; i < table.observables.size(); ++i) {
      const std::string& obs = table.observables[i];
      if (set.depth.count(obs)) continue;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const std::string& target = table.entries[i][j];
        if (target != "0" && set.depth.count(target) && set.depth[target] == depth - 1) {
          set.depth[obs] = depth;
          grew = true;
          break;
        }
      }
    }
    if (!grew) break;
  }

  set.accessible.reserve(set.depth.size());
  for (const auto& label : basis_labels(dim)) {
    if (set.depth.count(label)) set.accessible.push_back(label);
  }
  std::stable_sort(set.accessible.begin(), set.accessible.end(),
                   [&](const std::string& a, const std::string& b) {
                     return set.depth.at(a) < set.depth.at(b);
                   });
  return set;
}

std::vector<std::string> hamiltonian_term_labels(const ControlSetting& control) {
  validate_control(control);
  std::vector<std::string> terms;
  const std::string letters = "XYZ";
  if (control.num_qubits == 1) {
    if (control.omega1 > 0) {
      const Eigen::Vector3d n = control.axis1();
      for (int k = 0; k < 3; ++k) {
        if (std::abs(n[k]) > kZeroTol) terms.push_back(std::string(1, letters[k]));
      }
    }
    return terms;
  }
  if (control.g > 0) terms.push_back("XX");
  if (control.omega1 > 0) {
    const Eigen::Vector3d n = control.axis1();
    for (int k = 0; k < 3; ++k) {
      if (std::abs(n[k]) > kZeroTol) terms.push_back(std::string(1, letters[k]) + "I");
    }
  }
  if (control.omega2 > 0) {
    const Eigen::Vector3d n = control.axis2();
    for (int k = 0; k < 3; ++k) {
      if (std::abs(n[k]) > kZeroTol) terms.push_back("I" + std::string(1, letters[k]));
    }
  }
  return terms;
}

std::vector<std::string> candidate_hamiltonian_terms(int dim) {
  require_dim(dim, "candidate_hamiltonian_terms");
  if (dim == 2) return {"X", "Y", "Z"};
  return {"XX", "XI", "YI", "ZI", "IX", "IY", "IZ"};
}

ControlSetting named_setting(const std::string& code, double omega, double g) {
  const auto plus = code.find('+');
  if (plus == std::string::npos) {
    if (g != 0.0) throw ConfigError("named_setting: coupling requires a two-qubit code");
    const AxisSpec a = parse_axis_code(code);
    return single_qubit_control(a.theta, a.phi, a.driven ? omega : 0.0, code);
  }
  const AxisSpec a = parse_axis_code(code.substr(0, plus));
  const AxisSpec b = parse_axis_code(code.substr(plus + 1));
  return two_qubit_control(a.theta, a.phi, a.driven ? omega : 0.0, b.theta, b.phi,
                           b.driven ? omega : 0.0, g, code);
}

}  // namespace ctom
