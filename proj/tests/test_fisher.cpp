#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "ctom/controls.hpp"
#include "ctom/estimation.hpp"
#include "ctom/fisher.hpp"
#include "support.hpp"

using namespace ctom;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("undriven single qubit has only the z diagonal, in closed form") {
  const MeasurementConfig cfg{0.01, 200, 0.4};  // T = 2, tau = T/5
  const auto fm = fisher_matrix(single_qubit_control(0, 0, 0.0), cfg);
  REQUIRE(fm.labels == nonidentity_labels(2));
  const double expected = std::exp(-cfg.total_time() / (2 * cfg.tau)) *
                          cfg.total_time() / cfg.tau;  // 5 e^{-2.5}
  CHECK(fm.entries(2, 2) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(fm.entries(2, 2) == doctest::Approx(0.410425).epsilon(1e-4));
  CHECK(std::abs(fm.entries(0, 0)) < 1e-12);
  CHECK(std::abs(fm.entries(1, 1)) < 1e-12);
}

TEST_CASE("driven single qubit informs all three components") {
  const MeasurementConfig cfg{0.01, 200, 0.4};
  const double omega = 1.7 * 2 * kPi / cfg.total_time();
  const auto fm = fisher_matrix(single_qubit_control(kPi / 4, kPi / 4, omega), cfg);
  for (int i = 0; i < 3; ++i) CHECK(fm.entries(i, i) > 1e-3);

  // Nearly-parallel axis: almost all information stays on z.
  const auto fm_small = fisher_matrix(single_qubit_control(0.1, kPi / 4, omega), cfg);
  CHECK(fm_small.entries(2, 2) > fm_small.entries(0, 0));
  CHECK(fm_small.entries(2, 2) > fm_small.entries(1, 1));

  CHECK((fm.entries - fm.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fm.entries, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff() > -1e-10);
}

TEST_CASE("two-qubit Y+Z setting informs exactly four observables") {
  const MeasurementConfig cfg{0.01, 200, 0.4};
  const double rate = 1.5 * 2 * kPi / cfg.total_time();
  const auto fm = fisher_matrix(named_setting("Y+Z", rate, rate), cfg, {}, 2048);
  const double top = fm.entries.diagonal().maxCoeff();
  const std::set<std::string> expected{"XI", "YX", "YY", "ZI"};
  for (std::size_t i = 0; i < fm.labels.size(); ++i) {
    const bool informed = fm.entries(i, i) > 1e-6 * top;
    CHECK(informed == (expected.count(fm.labels[i]) != 0));
  }
}

TEST_CASE("fisher matrix is permutation equivariant") {
  const MeasurementConfig cfg{0.01, 100, 2.0};
  const ControlSetting c = single_qubit_control(kPi / 4, kPi / 4, 3.0);
  const auto base = fisher_matrix(c, cfg);
  const std::vector<std::string> permuted{"Y", "Z", "X"};
  const auto perm = fisher_matrix(c, cfg, permuted);
  const int map[3] = {1, 2, 0};  // permuted[i] == base.labels[map[i]]
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(perm.entries(i, j) == doctest::Approx(base.entries(map[i], map[j])).epsilon(1e-12));
}

TEST_CASE("simpson grid is converged") {
  const MeasurementConfig cfg{0.01, 200, 0.4};
  const double rate = 1.5 * 2 * kPi / cfg.total_time();
  const ControlSetting c = named_setting("XY+YZ", rate, rate);
  const auto coarse = fisher_matrix(c, cfg, {}, 8192);
  const auto fine = fisher_matrix(c, cfg, {}, 16384);
  const double scale = fine.entries.cwiseAbs().maxCoeff();
  CHECK((coarse.entries - fine.entries).cwiseAbs().maxCoeff() / scale < 1e-9);
}

TEST_CASE("cramer-rao floor") {
  const MeasurementConfig cfg{0.01, 200, 0.4};
  const auto fm = fisher_matrix(single_qubit_control(0, 0, 0.0), cfg);

  const int n = 500;
  const auto floor1 = crb_floor(fm, n);
  REQUIRE(floor1.labels == std::vector<std::string>{"Z"});
  CHECK(floor1.uninformed == std::vector<std::string>{"X", "Y"});
  const double expected =
      cfg.tau * std::exp(cfg.total_time() / (2 * cfg.tau)) / (n * cfg.total_time());
  CHECK(floor1.covariance(0, 0) == doctest::Approx(expected).epsilon(1e-9));

  const auto floor2 = crb_floor(fm, 2 * n);
  CHECK(floor2.covariance(0, 0) == doctest::Approx(floor1.covariance(0, 0) / 2).epsilon(1e-12));

  const double omega = 1.7 * 2 * kPi / cfg.total_time();
  const auto full = crb_floor(fisher_matrix(single_qubit_control(kPi / 4, kPi / 4, omega), cfg), n);
  CHECK(full.labels.size() == 3);
  CHECK((full.covariance - full.covariance.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(full.covariance, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff() > -1e-12);

  const MeasurementConfig zero_time{0.01, 0, 0.4};
  CHECK_THROWS_AS(crb_floor(fisher_matrix(single_qubit_control(0, 0, 0.0), zero_time, {}, 2048), n),
                  NumericalError);
}

TEST_CASE("ellipsoid radius") {
  Eigen::VectorXd c0(4);
  c0 << 1, 0, 0, 0;
  ErrorEllipsoid ell{PauliCoefficients(2, c0), Eigen::MatrixXd::Identity(3, 3)};
  Eigen::VectorXd n(3);
  n << 1, 0, 0;
  CHECK(ellipsoid_radius(ell, n) == doctest::Approx(1.0).epsilon(1e-14));

  ell.covariance = Eigen::Vector3d(4, 1, 1).asDiagonal();
  CHECK(ellipsoid_radius(ell, n) == doctest::Approx(2.0).epsilon(1e-14));

  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(3, 3);
    ell.covariance = a * a.transpose();
    Eigen::VectorXd dir(3);
    for (int i = 0; i < 3; ++i) dir[i] = rng.normal();
    dir.normalize();
    double quad = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) quad += dir[i] * ell.covariance(i, j) * dir[j];
    CHECK(ellipsoid_radius(ell, dir) == doctest::Approx(std::sqrt(quad)).epsilon(1e-12));
  }

  Eigen::VectorXd not_unit(3);
  not_unit << 1, 1, 0;
  CHECK_THROWS_AS(ellipsoid_radius(ell, not_unit), ConfigError);
}

TEST_CASE("weak-regime warning") {
  CHECK(fisher_validity_warning(MeasurementConfig{0.01, 200, 0.4}).has_value());
  CHECK_FALSE(fisher_validity_warning(MeasurementConfig{0.01, 200, 20.0}).has_value());
}

TEST_CASE("maximum-likelihood spread respects the CRB floor") {
  // Undriven qubit, weak regime: the informed block is 1x1 so the MLE of z is
  // a one-dimensional concave maximization per batch.
  const MeasurementConfig cfg{0.01, 200, 20.0};  // tau = 10T
  const ControlSetting control = single_qubit_control(0, 0, 0.0);
  const DensityMatrix truth = DensityMatrix::from_bloch(0, 0, 0.3);
  const int n_batches = 200, n_records = 120;

  const auto fm = fisher_matrix(control, cfg);
  const auto floor = crb_floor(fm, n_records);
  REQUIRE(floor.labels == std::vector<std::string>{"Z"});

  std::vector<double> estimates(n_batches);
  for (int b = 0; b < n_batches; ++b) {
    const auto records =
        simulate_records(truth, control, cfg, n_records, derive_stream_seed(1234, b));
    const BatchLikelihood bl(records);
    const auto loglik = [&](double z) {
      Eigen::VectorXd c(4);
      c << 1, 0, 0, z;
      return bl.log_likelihood(c);
    };
    // Golden-section search; the batch log-likelihood is concave in z.
    double lo = -1.0, hi = 1.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - gr * (hi - lo), c = lo + gr * (hi - lo);
    double fa = loglik(a), fc = loglik(c);
    for (int it = 0; it < 80; ++it) {
      if (fa > fc) {
        hi = c;
        c = a;
        fc = fa;
        a = hi - gr * (hi - lo);
        fa = loglik(a);
      } else {
        lo = a;
        a = c;
        fa = fc;
        c = lo + gr * (hi - lo);
        fc = loglik(c);
      }
    }
    estimates[b] = (lo + hi) / 2.0;
  }
  const double var = ctom_test::variance(estimates);
  // Chi-squared fluctuation of the sample variance (~10% sd at 200 batches).
  CHECK(var >= floor.covariance(0, 0) * 0.65);
}
