#pragma once

#include <array>
#include <string>
#include <vector>

#include "ctom/common.hpp"

namespace ctom {

/// d x d complex density matrix with d in {2, 4}. Construction checks
/// Hermiticity and unit trace. Positive semidefiniteness is a separate,
/// explicit check: candidate screening legitimately produces indefinite
/// matrices and must be able to hold them.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

  double purity() const;
  double min_eigenvalue() const;
  bool is_positive(double floor = kEigenvalueFloor) const;
  /// Hermitian + unit trace + positive semidefinite.
  bool is_valid(double floor = kEigenvalueFloor) const;

  static DensityMatrix maximally_mixed(int dim);
  /// Single-qubit state (I + x X + y Y + z Z) / 2.
  static DensityMatrix from_bloch(double x, double y, double z);
  /// Projector onto a computational basis state.
  static DensityMatrix basis_projector(int dim, int index);

 private:
  Matrix entries_;
};

/// Real expansion coefficients c_i = Tr(rho E_i) over the Pauli-string basis,
/// c_0 pinned to 1. For d = 4 the index order is row-major in (i, j) with
/// E_{ij} = sigma_i (x) sigma_j.
class PauliCoefficients {
 public:
  PauliCoefficients(int dim, Eigen::VectorXd coeffs);

  int dim() const { return dim_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](int i) const { return coeffs_[i]; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  /// (x, y, z) for a single qubit.
  Eigen::Vector3d bloch() const;

 private:
  int dim_;
  Eigen::VectorXd coeffs_;
};

/// A labeled Hermitian operator, e.g. a basis element "YX" = Y (x) X.
struct Observable {
  int dim = 2;
  Matrix matrix;
  std::string label;
};

// ---- Pauli-string basis, normalized so Tr(E_i E_j) = d delta_ij ----

/// "I","X","Y","Z" for d=2; "II","IX",...,"ZZ" (row-major) for d=4.
const std::vector<std::string>& basis_labels(int dim);
const std::vector<std::string>& nonidentity_labels(int dim);
const Matrix& basis_matrix(int dim, int index);
int basis_index(int dim, const std::string& label);
Observable pauli_observable(const std::string& label);

/// The continuously measured observable: Z for one qubit, Z (x) I for two.
const Matrix& measured_observable_matrix(int dim);
std::string measured_observable_label(int dim);

// ---- Operations ----

PauliCoefficients to_pauli(const DensityMatrix& rho);
/// rho = (1/d) sum_i c_i E_i. Hermitian and unit trace by construction;
/// positivity is NOT guaranteed (callers screen candidates themselves).
DensityMatrix from_pauli(const PauliCoefficients& coeffs);

/// Uhlmann fidelity Tr sqrt(sqrt(b) a sqrt(b)), symmetric in its arguments.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// (1/2) Tr |a - b|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Kronecker product of two single-qubit states.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
/// Reduced state of the second qubit of a two-qubit state.
DensityMatrix trace_out_first_qubit(const DensityMatrix& rho);

struct PositivityCheck {
  bool ok = false;
  std::array<double, 3> residuals{};  // all must be >= kConstraintFloor
};

/// Closed-form two-qubit positivity test on the coefficient matrix
/// D = [[1, v^T], [u, B]]: three polynomial constraints equivalent to
/// rho >= 0, evaluated without an eigendecomposition.
PositivityCheck check_two_qubit_positivity(const PauliCoefficients& coeffs);

/// Eigenvalue-based physicality check, valid for either dimension.
bool is_physical(const PauliCoefficients& coeffs, double floor = kEigenvalueFloor);

// ---- Hermitian matrix helpers (d <= 4: eigendecomposition, exactness over speed) ----

Matrix herm_sqrt(const Matrix& m);
/// exp(-i h t) for Hermitian h.
Matrix herm_exp_minus_i(const Matrix& h, double t);
double min_eigenvalue(const Matrix& hermitian);

}  // namespace ctom
