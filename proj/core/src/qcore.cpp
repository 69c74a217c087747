#include "ctom/qcore.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace ctom {

namespace {

using Eigen::SelfAdjointEigenSolver;

const std::array<Matrix, 4>& pauli_matrices() {
  static const std::array<Matrix, 4> p = [] {
    std::array<Matrix, 4> m;
    m[0] = Matrix::Identity(2, 2);
    m[1] = Matrix::Zero(2, 2);
    m[1] << 0, 1, 1, 0;
    m[2] = Matrix::Zero(2, 2);
    m[2] << 0, Complex(0, -1), Complex(0, 1), 0;
    m[3] = Matrix::Zero(2, 2);
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return p;
}

constexpr const char* kPauliLetters = "IXYZ";

std::vector<std::string> make_labels(int dim) {
  std::vector<std::string> labels;
  if (dim == 2) {
    for (int i = 0; i < 4; ++i) labels.push_back(std::string(1, kPauliLetters[i]));
  } else {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        labels.push_back({kPauliLetters[i], kPauliLetters[j]});
  }
  return labels;
}

std::vector<Matrix> make_basis(int dim) {
  const auto& p = pauli_matrices();
  std::vector<Matrix> basis;
  if (dim == 2) {
    basis.assign(p.begin(), p.end());
  } else {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        basis.push_back(Eigen::kroneckerProduct(p[i], p[j]).eval());
  }
  return basis;
}

const std::vector<Matrix>& basis_for(int dim) {
  require_dim(dim, "basis");
  static const std::vector<Matrix> b2 = make_basis(2);
  static const std::vector<Matrix> b4 = make_basis(4);
  return dim == 2 ? b2 : b4;
}

bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Cofactor matrix of a real 3x3 matrix.
Eigen::Matrix3d cofactor3(const Eigen::Matrix3d& b) {
  Eigen::Matrix3d c;
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int j = 0; j < 3; ++j) {
      const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      c(i, j) = b(i1, j1) * b(i2, j2) - b(i1, j2) * b(i2, j1);
    }
  }
  return c;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  const int d = static_cast<int>(entries_.rows());
  require_dim(d, "DensityMatrix");
  if (entries_.cols() != d) throw DimensionError("DensityMatrix: matrix not square");
  if (!is_hermitian(entries_, kHermitianTol)) {
    throw Error("DensityMatrix: not Hermitian within tolerance");
  }
  if (std::abs(entries_.trace().real() - 1.0) > kTraceTol ||
      std::abs(entries_.trace().imag()) > kTraceTol) {
    throw Error("DensityMatrix: trace differs from 1 beyond tolerance");
  }
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

double DensityMatrix::min_eigenvalue() const { return ctom::min_eigenvalue(entries_); }

bool DensityMatrix::is_positive(double floor) const { return min_eigenvalue() >= floor; }

bool DensityMatrix::is_valid(double floor) const {
  return is_positive(floor);  // Hermiticity and trace already hold by construction
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  require_dim(dim, "maximally_mixed");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_bloch(double x, double y, double z) {
  Eigen::VectorXd c(4);
  c << 1.0, x, y, z;
  return from_pauli(PauliCoefficients(2, c));
}

DensityMatrix DensityMatrix::basis_projector(int dim, int index) {
  require_dim(dim, "basis_projector");
  if (index < 0 || index >= dim) throw ConfigError("basis_projector: index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

PauliCoefficients::PauliCoefficients(int dim, Eigen::VectorXd coeffs)
    : dim_(dim), coeffs_(std::move(coeffs)) {
  require_dim(dim_, "PauliCoefficients");
  if (coeffs_.size() != dim_ * dim_) {
    throw DimensionError("PauliCoefficients: expected dim^2 coefficients");
  }
  if (coeffs_[0] != 1.0) throw ConfigError("PauliCoefficients: c_0 must be exactly 1");
}

Eigen::Vector3d PauliCoefficients::bloch() const {
  if (dim_ != 2) throw DimensionError("bloch: single-qubit only");
  return coeffs_.segment(1, 3);
}

const std::vector<std::string>& basis_labels(int dim) {
  require_dim(dim, "basis_labels");
  static const std::vector<std::string> l2 = make_labels(2);
  static const std::vector<std::string> l4 = make_labels(4);
  return dim == 2 ? l2 : l4;
}

const std::vector<std::string>& nonidentity_labels(int dim) {
  require_dim(dim, "nonidentity_labels");
  static const std::vector<std::string> n2 = [] {
    auto l = make_labels(2);
    return std::vector<std::string>(l.begin() + 1, l.end());
  }();
  static const std::vector<std::string> n4 = [] {
    auto l = make_labels(4);
    return std::vector<std::string>(l.begin() + 1, l.end());
  }();
  return dim == 2 ? n2 : n4;
}

const Matrix& basis_matrix(int dim, int index) {
  const auto& basis = basis_for(dim);
  if (index < 0 || index >= static_cast<int>(basis.size())) {
    throw ConfigError("basis_matrix: index out of range");
  }
  return basis[index];
}

int basis_index(int dim, const std::string& label) {
  const auto& labels = basis_labels(dim);
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[i] == label) return i;
  }
  throw ConfigError("basis_index: unknown label '" + label + "'");
}

Observable pauli_observable(const std::string& label) {
  const int dim = label.size() == 1 ? 2 : label.size() == 2 ? 4 : 0;
  if (dim == 0) throw ConfigError("pauli_observable: bad label '" + label + "'");
  return Observable{dim, basis_matrix(dim, basis_index(dim, label)), label};
}

const Matrix& measured_observable_matrix(int dim) {
  require_dim(dim, "measured_observable");
  static const Matrix z = basis_matrix(2, 3);
  static const Matrix zi = basis_matrix(4, basis_index(4, "ZI"));
  return dim == 2 ? z : zi;
}

std::string measured_observable_label(int dim) { return dim == 2 ? "Z" : "ZI"; }

PauliCoefficients to_pauli(const DensityMatrix& rho) {
  const int d = rho.dim();
  const auto& basis = basis_for(d);
  Eigen::VectorXd c(d * d);
  for (int i = 0; i < d * d; ++i) {
    c[i] = (rho.matrix() * basis[i]).trace().real();
  }
  c[0] = 1.0;  // Tr(rho) = 1 within kTraceTol by construction
  return PauliCoefficients(d, std::move(c));
}

DensityMatrix from_pauli(const PauliCoefficients& coeffs) {
  const int d = coeffs.dim();
  const auto& basis = basis_for(d);
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d * d; ++i) m += coeffs[i] * basis[i];
  m /= static_cast<double>(d);
  m = ((m + m.adjoint()) / 2.0).eval();
  return DensityMatrix(std::move(m));
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Matrix sb = herm_sqrt(b.matrix());
  const Matrix m = sb * a.matrix() * sb;
  SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    f += std::sqrt(std::max(0.0, es.eigenvalues()[i]));
  }
  return std::min(f, 1.0 + 1e-9);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace_distance: dimension mismatch");
  SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw DimensionError("tensor: both factors must be single-qubit");
  }
  return DensityMatrix(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
}

DensityMatrix trace_out_first_qubit(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw DimensionError("trace_out_first_qubit: need a two-qubit state");
  Matrix r = Matrix::Zero(2, 2);
  const Matrix& m = rho.matrix();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r(i, j) = m(i, j) + m(i + 2, j + 2);
  return DensityMatrix(std::move(r));
}

PositivityCheck check_two_qubit_positivity(const PauliCoefficients& coeffs) {
  if (coeffs.dim() != 4) {
    throw DimensionError("check_two_qubit_positivity: two-qubit coefficients required");
  }
  Eigen::Matrix4d d;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      d(i, j) = coeffs[4 * i + j];

  const Eigen::Vector3d v = d.block<1, 3>(0, 1).transpose();
  const Eigen::Vector3d u = d.block<3, 1>(1, 0);
  const Eigen::Matrix3d b = d.block<3, 3>(1, 1);
  const Eigen::Matrix3d bt = cofactor3(b);

  const double norm_d2 = d.squaredNorm();
  const double ubv = u.dot(b * v);
  const double det_b = b.determinant();

  PositivityCheck out;
  out.residuals[0] = 4.0 - norm_d2;
  out.residuals[1] = 2.0 * (ubv - det_b) - (norm_d2 - 2.0);
  out.residuals[2] = 8.0 * (ubv - det_b) + (norm_d2 - 2.0) * (norm_d2 - 2.0) +
                     8.0 * u.dot(bt * v) -
                     4.0 * (u.squaredNorm() * v.squaredNorm() +
                            (b.transpose() * u).squaredNorm() + (b * v).squaredNorm() +
                            bt.squaredNorm());
  out.ok = out.residuals[0] >= kConstraintFloor && out.residuals[1] >= kConstraintFloor &&
           out.residuals[2] >= kConstraintFloor;
  return out;
}

bool is_physical(const PauliCoefficients& coeffs, double floor) {
  return from_pauli(coeffs).is_positive(floor);
}

Matrix herm_sqrt(const Matrix& m) {
  SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix herm_exp_minus_i(const Matrix& h, double t) {
  SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases[i] = std::exp(Complex(0.0, -es.eigenvalues()[i] * t));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const Matrix& hermitian) {
  SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace ctom
