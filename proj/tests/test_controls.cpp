#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ctom/controls.hpp"
#include "ctom/fisher.hpp"

using namespace ctom;

namespace {

constexpr double kPi = std::numbers::pi;

std::string entry(const CommutatorTable& t, const std::string& obs, const std::string& term) {
  const auto oi = std::find(t.observables.begin(), t.observables.end(), obs);
  const auto ti = std::find(t.ham_terms.begin(), t.ham_terms.end(), term);
  REQUIRE(oi != t.observables.end());
  REQUIRE(ti != t.ham_terms.end());
  return t.entries[oi - t.observables.begin()][ti - t.ham_terms.begin()];
}

std::set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("single-qubit commutator table matches the known structure") {
  const auto t = commutator_table(2, {"X", "Y", "Z"});
  CHECK(entry(t, "Z", "Z") == "0");
  CHECK(entry(t, "Y", "X") == "Z");
  CHECK(entry(t, "Z", "X") == "Y");
  CHECK(entry(t, "X", "Y") == "Z");
  CHECK(entry(t, "Z", "Y") == "X");
  CHECK(entry(t, "X", "Z") == "Y");
  CHECK(entry(t, "Y", "Z") == "X");
  CHECK(entry(t, "X", "X") == "0");
  CHECK(entry(t, "Y", "Y") == "0");

  // Proportionality factors are discarded, so the label map is symmetric.
  for (const auto& a : t.observables)
    for (const auto& b : t.ham_terms)
      CHECK(entry(t, a, b) == entry(t, b, a));
}

TEST_CASE("two-qubit commutator entries") {
  const auto t = commutator_table(4, candidate_hamiltonian_terms(4));
  CHECK(entry(t, "YX", "XX") == "ZI");
  CHECK(entry(t, "ZI", "XX") == "YX");
  CHECK(entry(t, "ZZ", "ZI") == "0");
  CHECK(entry(t, "YY", "IZ") == "YX");
}

TEST_CASE("reachability for the bundled control settings") {
  const double omega = 1.5 * kPi, g = 1.5 * kPi;

  const auto x_only = reachability(named_setting("X", omega), 15);
  CHECK(as_set(x_only.accessible) == std::set<std::string>{"Z", "Y"});
  CHECK(x_only.depth.at("Z") == 0);
  CHECK(x_only.depth.at("Y") == 1);
  CHECK_FALSE(x_only.contains("X"));

  const auto yz = reachability(named_setting("Y+Z", omega, g), 15);
  CHECK(as_set(yz.accessible) == std::set<std::string>{"ZI", "XI", "YX", "YY"});

  const auto remote = reachability(named_setting("0+XYZ", omega, g), 15);
  CHECK(as_set(remote.accessible) == std::set<std::string>{"ZI", "YX", "YY", "YZ"});

  const auto xyyz = reachability(named_setting("XY+YZ", omega, g), 15);
  CHECK(xyyz.accessible.size() == 15);
  const auto full = reachability(named_setting("XYZ+XYZ", omega, g), 15);
  CHECK(full.accessible.size() == 15);
}

TEST_CASE("reachability is monotone in depth and stabilizes") {
  const ControlSetting c = named_setting("XY+YZ", 2.0, 2.0);
  std::size_t prev = 0;
  for (int depth = 1; depth <= 15; ++depth) {
    const auto r = reachability(c, depth);
    CHECK(r.accessible.size() >= prev);
    prev = r.accessible.size();
  }
  const auto fixed = reachability(c, 15);
  const auto beyond = reachability(c, 30);
  CHECK(as_set(fixed.accessible) == as_set(beyond.accessible));
  CHECK_THROWS_AS(reachability(c, 0), ConfigError);
}

TEST_CASE("named settings resolve to the documented axes") {
  const auto remote = named_setting("0+XYZ", 3.0, 2.0);
  CHECK(remote.omega1 == 0.0);
  CHECK(remote.omega2 == 3.0);
  CHECK(remote.g == 2.0);
  const Eigen::Vector3d n2 = remote.axis2();
  CHECK(n2[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(n2[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(n2[2] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));

  const auto xyyz = named_setting("XY+YZ", 3.0, 2.0);
  const Eigen::Vector3d a1 = xyyz.axis1(), a2 = xyyz.axis2();
  const double s = 1 / std::sqrt(2.0);
  CHECK(a1[0] == doctest::Approx(s).epsilon(1e-14));
  CHECK(a1[1] == doctest::Approx(s).epsilon(1e-14));
  CHECK(std::abs(a1[2]) < 1e-14);
  CHECK(std::abs(a2[0]) < 1e-14);
  CHECK(a2[1] == doctest::Approx(s).epsilon(1e-14));
  CHECK(a2[2] == doctest::Approx(s).epsilon(1e-14));

  const auto both = named_setting("XYZ+XYZ", 3.0, 2.0);
  CHECK((both.axis1() - both.axis2()).norm() < 1e-14);
  CHECK(both.axis1()[2] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));

  const auto yz = named_setting("Y+Z", 3.0, 2.0);
  CHECK((yz.axis1() - Eigen::Vector3d(0, 1, 0)).norm() < 1e-14);
  CHECK((yz.axis2() - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);

  const auto single = named_setting("XYZ", 3.0);
  CHECK(single.num_qubits == 1);
  CHECK(single.theta1 == doctest::Approx(kPi / 4));

  CHECK_THROWS_AS(named_setting("W+Z", 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(named_setting("X", 1.0, 1.0), ConfigError);  // coupling needs 2 qubits
}

TEST_CASE("hamiltonian term labels track nonzero summands") {
  CHECK(as_set(hamiltonian_term_labels(named_setting("0+XYZ", 2.0, 1.0))) ==
        std::set<std::string>{"XX", "IX", "IY", "IZ"});
  CHECK(as_set(hamiltonian_term_labels(named_setting("XY+YZ", 2.0, 1.0))) ==
        std::set<std::string>{"XX", "XI", "YI", "IY", "IZ"});
  CHECK(hamiltonian_term_labels(named_setting("0+XYZ", 2.0, 0.0)).size() == 3);
  CHECK(hamiltonian_term_labels(single_qubit_control(0, 0, 0)).empty());
}

TEST_CASE("reachable labels are the ones with Fisher information") {
  // Weak-measurement cross-check at tau = 10T on one subset setting.
  const MeasurementConfig cfg{0.01, 200, 20.0};
  const double rate = 1.5 * 2 * kPi / cfg.total_time();
  const ControlSetting c = named_setting("Y+Z", rate, rate);
  const auto reach = reachability(c, 15);
  const auto fm = fisher_matrix(c, cfg, {}, 2048);
  const double top = fm.entries.diagonal().maxCoeff();
  for (std::size_t i = 0; i < fm.labels.size(); ++i) {
    const bool informed = fm.entries(i, i) > 1e-6 * top;
    CHECK(informed == reach.contains(fm.labels[i]));
  }
}
