#pragma once

#include <map>
#include <string>
#include <vector>

#include "ctom/dynamics.hpp"
#include "ctom/qcore.hpp"

namespace ctom {

/// Commutation structure between state observables and Hamiltonian terms.
/// entries[i][j] is the basis label L with [term_j, obs_i] proportional to
/// E_L (proportionality factors discarded), or "0" when it vanishes.
struct CommutatorTable {
  int dim = 2;
  std::vector<std::string> observables;  // non-identity basis labels
  std::vector<std::string> ham_terms;
  std::vector<std::vector<std::string>> entries;
};

CommutatorTable commutator_table(int dim, const std::vector<std::string>& ham_terms);

/// Which state components can feed information into the measured observable.
struct ReachabilitySet {
  std::vector<std::string> accessible;   // ordered by depth, then basis index
  std::map<std::string, int> depth;      // label -> minimal commutator order

  bool contains(const std::string& label) const { return depth.count(label) != 0; }
};

/// Breadth-first closure from the measured observable: a label joins when a
/// single commutator against some Hamiltonian summand lands on an already
/// reachable label. Depth 0 is the measured observable itself.
ReachabilitySet reachability(const ControlSetting& control, int max_depth = 6);

/// Hamiltonian summand labels with nonzero coefficient for this control.
std::vector<std::string> hamiltonian_term_labels(const ControlSetting& control);

/// All terms the control Hamiltonian can contain: {X, Y, Z} for one qubit,
/// {XX, XI, YI, ZI, IX, IY, IZ} for two.
std::vector<std::string> candidate_hamiltonian_terms(int dim);

/// Catalog of setting codes. Two-qubit codes are "A+B" with A, B axis codes
/// for the measured and unmeasured qubit ("0" means no drive on that qubit);
/// single-qubit codes are the axis code alone. The composite axis codes map
/// to XY -> (1,1,0)/sqrt2, YZ -> (0,1,1)/sqrt2, XZ -> (1,0,1)/sqrt2 and
/// XYZ -> (1/2, 1/2, 1/sqrt2), i.e. theta = phi = pi/4.
ControlSetting named_setting(const std::string& code, double omega, double g = 0.0);

}  // namespace ctom
