#include "ctom/sampling.hpp"

#include <cmath>
#include <sstream>

namespace ctom {

namespace {

const DensityMatrix& bell_projector() {
  static const DensityMatrix bell = [] {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return DensityMatrix(std::move(m));
  }();
  return bell;
}

std::string bloch_label(double x, double y, double z) {
  std::ostringstream os;
  os << "bloch(" << x << "," << y << "," << z << ")";
  return os.str();
}

void add_bloch(StateCatalog& cat, double x, double y, double z) {
  cat.states.emplace_back(bloch_label(x, y, z), DensityMatrix::from_bloch(x, y, z));
}

void add_werner(StateCatalog& cat, double p, const Eigen::Vector3d& r1,
                const Eigen::Vector3d& r2) {
  std::ostringstream os;
  os << "W(" << p << "," << bloch_label(r1[0], r1[1], r1[2]) << ","
     << bloch_label(r2[0], r2[1], r2[2]) << ")";
  cat.states.emplace_back(
      os.str(), werner_mix(p, DensityMatrix::from_bloch(r1[0], r1[1], r1[2]),
                           DensityMatrix::from_bloch(r2[0], r2[1], r2[2])));
}

}  // namespace

DensityMatrix hs_random(int dim, Rng& rng) {
  require_dim(dim, "hs_random");
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = Complex(rng.normal(), rng.normal());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityMatrix(std::move(rho));
}

DensityMatrix werner_mix(double p, const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (p < 0.0 || p > 1.0) throw ConfigError("werner_mix: p must lie in [0, 1]");
  const DensityMatrix product = tensor(rho1, rho2);
  return DensityMatrix(((1.0 - p) * product.matrix() + p * bell_projector().matrix()).eval());
}

const DensityMatrix& StateCatalog::at(int index) const {
  if (index < 0 || index >= size()) {
    throw ConfigError("StateCatalog: index " + std::to_string(index) + " out of range for '" +
                      name + "' (" + std::to_string(size()) + " states)");
  }
  return states[index].second;
}

StateCatalog builtin_catalog(const std::string& name) {
  StateCatalog cat;
  cat.name = name;
  if (name == "single-qubit-9") {
    add_bloch(cat, -0.4, -0.6, 0.3);
    add_bloch(cat, -0.4, 0.6, -0.3);
    add_bloch(cat, -0.4, 0.6, 0.3);
    add_bloch(cat, 0.4, 0.6, -0.3);
    add_bloch(cat, -0.7, -0.5, -0.3);
    add_bloch(cat, -0.7, -0.5, 0.3);
    add_bloch(cat, 0.7, -0.5, 0.3);
    add_bloch(cat, -0.5, 0.3, 0.8);
    add_bloch(cat, -0.5, -0.3, -0.8);
    add_bloch(cat, 0.5, 0.3, 0.8);
    return cat;
  }
  if (name == "remote-10") {
    const double s = 1.0 / std::sqrt(2.0);
    add_bloch(cat, s, s, 0.0);
    add_bloch(cat, -0.6, -0.4, 0.3);
    add_bloch(cat, -0.7, -0.5, -0.3);
    add_bloch(cat, 0.0, -0.5, 0.3);
    add_bloch(cat, 0.3, -0.3, 0.3);
    add_bloch(cat, 0.3, -0.7, 0.5);
    add_bloch(cat, 0.5, 0.3, 0.8);
    add_bloch(cat, 0.7, -0.5, 0.1);
    add_bloch(cat, 0.7, 0.0, 0.0);
    add_bloch(cat, 0.7, 0.0, 0.3);
    return cat;
  }
  if (name == "two-qubit-9") {
    add_werner(cat, 0.5, {0.7, -0.2, 0.3}, {0.6, -0.1, 0.4});
    cat.states.emplace_back("bell-phi+", bell_projector());
    add_werner(cat, 0.2, {-0.4, -0.75, 0.5}, {0.6, -0.5, 0.6});
    add_werner(cat, 0.5, {0.2, -0.75, 0.5}, {0.6, -0.5, 0.4});
    add_werner(cat, 0.8, {0.2, -0.75, 0.5}, {0.6, -0.5, 0.4});
    cat.states.emplace_back("product(0.7,-0.2,0.5)x(0.6,-0.5,0.4)",
                            tensor(DensityMatrix::from_bloch(0.7, -0.2, 0.5),
                                   DensityMatrix::from_bloch(0.6, -0.5, 0.4)));
    add_werner(cat, 0.5, {0.7, -0.2, 0.5}, {0.6, -0.5, 0.4});
    add_werner(cat, 0.8, {0.7, -0.2, 0.5}, {0.6, -0.5, 0.4});
    cat.states.emplace_back("product(0.7,-0.2,0.3)x(0.6,-0.1,0.4)",
                            tensor(DensityMatrix::from_bloch(0.7, -0.2, 0.3),
                                   DensityMatrix::from_bloch(0.6, -0.1, 0.4)));
    return cat;
  }
  throw ConfigError("builtin_catalog: unknown catalog '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"single-qubit-9", "remote-10", "two-qubit-9"};
}

}  // namespace ctom
