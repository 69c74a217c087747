#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctom/qcore.hpp"
#include "ctom/rng.hpp"

namespace ctom {

/// Hilbert-Schmidt-uniform density matrix via the Ginibre construction:
/// G a d x d matrix of i.i.d. standard complex Gaussians, rho = GG^dag / Tr.
DensityMatrix hs_random(int dim, Rng& rng);

/// (1 - p) rho1 (x) rho2 + p |Phi+><Phi+| with |Phi+> = (|00> + |11>)/sqrt2.
DensityMatrix werner_mix(double p, const DensityMatrix& rho1, const DensityMatrix& rho2);

struct StateCatalog {
  std::string name;
  std::vector<std::pair<std::string, DensityMatrix>> states;  // (label, state)

  int size() const { return static_cast<int>(states.size()); }
  const DensityMatrix& at(int index) const;
};

/// Fixed test-state lists: "single-qubit-9" (ten Bloch vectors), "remote-10"
/// (ten unknown-qubit Bloch vectors), "two-qubit-9" (nine product/Werner
/// mixtures).
StateCatalog builtin_catalog(const std::string& name);

std::vector<std::string> catalog_names();

}  // namespace ctom
