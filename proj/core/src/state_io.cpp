#include "ctom/state_io.hpp"

#include <fstream>

#include <json.hpp>

namespace ctom {

std::string state_to_json(const DensityMatrix& rho) {
  const PauliCoefficients c = to_pauli(rho);
  nlohmann::json j;
  j["dim"] = rho.dim();
  j["pauli"] = std::vector<double>(c.coeffs().data(), c.coeffs().data() + c.size());
  return j.dump();
}

DensityMatrix state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("state JSON parse error: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("pauli")) {
    throw DataError("state JSON must contain 'dim' and 'pauli'");
  }
  const int dim = j["dim"].get<int>();
  require_dim(dim, "state JSON");
  const auto values = j["pauli"].get<std::vector<double>>();
  if (static_cast<int>(values.size()) != dim * dim) {
    throw DataError("state JSON: expected " + std::to_string(dim * dim) + " coefficients");
  }
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  if (std::abs(c[0] - 1.0) > 1e-9) {
    throw DataError("state JSON: identity coefficient must be 1");
  }
  c[0] = 1.0;
  return from_pauli(PauliCoefficients(dim, std::move(c)));
}

void write_state_json(const std::filesystem::path& path, const DensityMatrix& rho) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  os << state_to_json(rho) << "\n";
  if (!os) throw DataError("failed writing '" + path.string() + "'");
}

DensityMatrix read_state_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open state file '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return state_from_json(text);
}

}  // namespace ctom
