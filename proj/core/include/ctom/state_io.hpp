#pragma once

#include <filesystem>
#include <string>

#include "ctom/qcore.hpp"

namespace ctom {

/// Canonical textual form of a state: {"dim": d, "pauli": [c_0, ...]} with
/// coefficients in row-major (i, j) order for d = 4.
std::string state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const std::string& text);

void write_state_json(const std::filesystem::path& path, const DensityMatrix& rho);
DensityMatrix read_state_json(const std::filesystem::path& path);

}  // namespace ctom
