#include <doctest.h>

#include <cmath>

#include "ctom/qcore.hpp"
#include "ctom/sampling.hpp"
#include "support.hpp"

using namespace ctom;
using ctom_test::haar_unitary;
using ctom_test::random_hermitian_unit_trace;

namespace {

DensityMatrix bell_state() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return DensityMatrix(std::move(m));
}

}  // namespace

TEST_CASE("pauli basis is orthogonal with norm d") {
  for (int dim : {2, 4}) {
    const int n = dim * dim;
    for (int i = 0; i < n; ++i) {
      const Matrix& ei = basis_matrix(dim, i);
      CHECK((ei - ei.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
      for (int j = 0; j < n; ++j) {
        const double overlap = (ei * basis_matrix(dim, j)).trace().real();
        CHECK(overlap == doctest::Approx(i == j ? dim : 0.0).epsilon(1e-14));
      }
    }
  }
  CHECK(basis_index(4, "ZI") == 12);
  CHECK(basis_labels(4)[6] == "XY");
  CHECK_THROWS_AS(basis_index(2, "Q"), ConfigError);
}

TEST_CASE("to_pauli on reference states") {
  const auto mixed = to_pauli(DensityMatrix::maximally_mixed(2));
  CHECK(mixed[0] == 1.0);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(mixed[i]) < 1e-14);

  const auto fig4 = to_pauli(DensityMatrix::from_bloch(-0.4, -0.6, 0.3));
  CHECK(fig4[1] == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(fig4[2] == doctest::Approx(-0.6).epsilon(1e-12));
  CHECK(fig4[3] == doctest::Approx(0.3).epsilon(1e-12));

  const auto bell = to_pauli(bell_state());
  for (int i = 0; i < 16; ++i) {
    const std::string& label = basis_labels(4)[i];
    double expected = 0.0;
    if (label == "II" || label == "XX" || label == "ZZ") expected = 1.0;
    if (label == "YY") expected = -1.0;
    CHECK(bell[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("from_pauli on reference coefficients") {
  Eigen::VectorXd c(4);
  c << 1, 0, 0, 0;
  CHECK((from_pauli(PauliCoefficients(2, c)).matrix() - Matrix::Identity(2, 2) / 2.0)
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  c << 1, 1, 0, 0;
  const DensityMatrix plus = from_pauli(PauliCoefficients(2, c));
  Matrix expected(2, 2);
  expected << 0.5, 0.5, 0.5, 0.5;
  CHECK((plus.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

  // Eigenvalues (1 +- |r|)/2 with |r| = sqrt(0.83): 0.95554, 0.04446.
  c << 1, 0.7, -0.5, 0.3;
  const DensityMatrix rho = from_pauli(PauliCoefficients(2, c));
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  const double r = std::sqrt(0.83);
  CHECK(es.eigenvalues()[0] == doctest::Approx((1 - r) / 2).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] == doctest::Approx((1 + r) / 2).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] == doctest::Approx(0.956).epsilon(1e-3));
  CHECK(es.eigenvalues()[0] == doctest::Approx(0.044).epsilon(2e-2));

  Eigen::VectorXd bad(4);
  bad << 0.99, 0, 0, 0;
  CHECK_THROWS_AS(PauliCoefficients(2, bad), ConfigError);
}

TEST_CASE("to_pauli and from_pauli invert each other on valid states") {
  Rng rng(11);
  for (int dim : {2, 4}) {
    for (int k = 0; k < 50; ++k) {
      const DensityMatrix rho = hs_random(dim, rng);
      const DensityMatrix back = from_pauli(to_pauli(rho));
      CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("fidelity reference values") {
  const DensityMatrix rho0 = DensityMatrix::from_bloch(-0.4, -0.6, 0.3);
  CHECK(fidelity(rho0, rho0) == doctest::Approx(1.0).epsilon(1e-10));

  // Qubit closed form F = sqrt(Tr(ab) + 2 sqrt(det a det b)) gives 0.9180784.
  const DensityMatrix zonly = DensityMatrix::from_bloch(0, 0, 0.3);
  CHECK(fidelity(rho0, zonly) == doctest::Approx(0.9180784).epsilon(1e-6));
  CHECK(fidelity(rho0, zonly) == doctest::Approx(0.918).epsilon(1e-3));
  CHECK(fidelity(rho0, zonly) == doctest::Approx(fidelity(zonly, rho0)).epsilon(1e-12));

  const DensityMatrix zero = DensityMatrix::basis_projector(2, 0);
  const DensityMatrix plus = DensityMatrix::from_bloch(1, 0, 0);
  CHECK(fidelity(zero, plus) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));

  CHECK_THROWS_AS(fidelity(zero, DensityMatrix::maximally_mixed(4)), DimensionError);
}

TEST_CASE("trace distance reference values and Bloch form") {
  const DensityMatrix a = DensityMatrix::from_bloch(0.2, -0.1, 0.4);
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(trace_distance(DensityMatrix::basis_projector(2, 0),
                       DensityMatrix::basis_projector(2, 1)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector3d r1 = ctom_test::rejection_bloch_ball(rng);
    const Eigen::Vector3d r2 = ctom_test::rejection_bloch_ball(rng);
    const double d = trace_distance(DensityMatrix::from_bloch(r1[0], r1[1], r1[2]),
                                    DensityMatrix::from_bloch(r2[0], r2[1], r2[2]));
    CHECK(d == doctest::Approx((r1 - r2).norm() / 2.0).epsilon(1e-10));
  }
}

TEST_CASE("fidelity/trace-distance sandwich and unitary invariance") {
  Rng rng(23);
  for (int dim : {2, 4}) {
    for (int k = 0; k < 2000; ++k) {
      const DensityMatrix a = hs_random(dim, rng);
      const DensityMatrix b = hs_random(dim, rng);
      const double f = fidelity(a, b);
      const double d = trace_distance(a, b);
      CHECK(1.0 - f <= d + 1e-9);
      CHECK(d <= std::sqrt(std::max(0.0, 1.0 - f * f)) + 1e-9);
    }
  }

  for (int k = 0; k < 100; ++k) {
    const DensityMatrix a = DensityMatrix::from_bloch(0.3, -0.2, 0.5);
    const DensityMatrix b = DensityMatrix::from_bloch(-0.6, 0.1, 0.2);
    const Matrix u = haar_unitary(2, rng);
    const DensityMatrix ua((u * a.matrix() * u.adjoint()).eval());
    const DensityMatrix ub((u * b.matrix() * u.adjoint()).eval());
    CHECK(fidelity(ua, ub) == doctest::Approx(fidelity(a, b)).epsilon(1e-10));
    CHECK(trace_distance(ua, ub) == doctest::Approx(trace_distance(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("tensor products") {
  const DensityMatrix mixed4 = tensor(DensityMatrix::maximally_mixed(2),
                                      DensityMatrix::maximally_mixed(2));
  CHECK((mixed4.matrix() - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);

  const DensityMatrix p00 = tensor(DensityMatrix::basis_projector(2, 0),
                                   DensityMatrix::basis_projector(2, 0));
  CHECK(p00.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(p00.matrix().cwiseAbs().sum() == doctest::Approx(1.0));

  // Coefficients of a product state factorize: c_ij = c_i(a) c_j(b).
  const DensityMatrix a = DensityMatrix::from_bloch(-0.4, -0.75, 0.5);
  const DensityMatrix b = DensityMatrix::from_bloch(0.6, -0.5, 0.6);
  const auto ca = to_pauli(a), cb = to_pauli(b), cab = to_pauli(tensor(a, b));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(cab[4 * i + j] == doctest::Approx(ca[i] * cb[j]).epsilon(1e-12));

  CHECK_THROWS_AS(tensor(a, tensor(a, b)), DimensionError);
}

TEST_CASE("partial trace of a product recovers the second factor") {
  const DensityMatrix anc = DensityMatrix::from_bloch(0, 1, 0);
  const DensityMatrix unk = DensityMatrix::from_bloch(0.3, -0.3, 0.3);
  const DensityMatrix red = trace_out_first_qubit(tensor(anc, unk));
  CHECK((red.matrix() - unk.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("two-qubit positivity constraints on reference points") {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(16);
  c[0] = 1.0;
  auto mixed = check_two_qubit_positivity(PauliCoefficients(4, c));
  CHECK(mixed.ok);
  CHECK(mixed.residuals[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(mixed.residuals[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mixed.residuals[2] == doctest::Approx(1.0).epsilon(1e-12));

  auto bell = check_two_qubit_positivity(to_pauli(bell_state()));
  CHECK(bell.ok);  // boundary: pure state
  CHECK(bell.residuals[0] == doctest::Approx(0.0).epsilon(1e-10));

  c.setZero();
  c[0] = 1.0;
  c[15] = 2.0;  // c_zz = 2
  auto invalid = check_two_qubit_positivity(PauliCoefficients(4, c));
  CHECK_FALSE(invalid.ok);
  CHECK(from_pauli(PauliCoefficients(4, c)).min_eigenvalue() < -1e-3);
}

TEST_CASE("valid two-qubit states stay inside the coefficient ball") {
  Rng rng(3);
  for (int k = 0; k < 2000; ++k) {
    const auto c = to_pauli(hs_random(4, rng));
    CHECK(c.coeffs().tail(15).squaredNorm() <= 3.0 + 1e-10);
  }
}

TEST_CASE("positivity constraints agree with the eigenvalue oracle") {
  Rng rng(77);
  int checked = 0;
  for (int k = 0; k < 10000; ++k) {
    Matrix h = random_hermitian_unit_trace(4, rng);
    const DensityMatrix rho(std::move(h));
    const auto check = check_two_qubit_positivity(to_pauli(rho));
    const double min_ev = rho.min_eigenvalue();
    const double min_res =
        std::min({check.residuals[0], check.residuals[1], check.residuals[2]});
    // Skip the boundary band where the two tests legitimately differ in rounding.
    if (std::abs(min_ev) < 1e-9 || std::abs(min_res) < 1e-9) continue;
    ++checked;
    CHECK(check.ok == (min_ev >= -1e-9));
  }
  CHECK(checked > 9000);
}

TEST_CASE("density matrix construction guards") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_AS(DensityMatrix{bad}, Error);  // not Hermitian

  Matrix off_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{off_trace}, Error);  // trace 2

  CHECK_THROWS_AS(DensityMatrix{Matrix::Identity(3, 3) / 3.0}, DimensionError);

  // Indefinite but Hermitian/unit-trace is representable (candidate screening).
  Matrix indefinite(2, 2);
  indefinite << 1.5, 0, 0, -0.5;
  const DensityMatrix rho(indefinite);
  CHECK_FALSE(rho.is_positive());
  CHECK_FALSE(rho.is_valid());
}
