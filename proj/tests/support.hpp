#pragma once

// Shared test oracles and helpers. Everything here is deliberately
// independent of the library code paths it is used to check: explicit
// operator products instead of chain rules, rejection sampling instead of
// Ginibre, eigenvalues instead of closed-form constraints.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ctom/dynamics.hpp"
#include "ctom/qcore.hpp"
#include "ctom/rng.hpp"

namespace ctom_test {

using ctom::Complex;
using ctom::Matrix;

inline Matrix haar_unitary(int dim, ctom::Rng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

/// Random Hermitian with unit trace; indefinite with sizeable probability.
inline Matrix random_hermitian_unit_trace(int dim, ctom::Rng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = Complex(rng.normal(), rng.normal());
  Matrix h = (g + g.adjoint()) / 2.0;
  double tr = h.trace().real();
  if (std::abs(tr) < 0.3) {  // keep the trace normalization well conditioned
    h += Matrix::Identity(dim, dim);
    tr += dim;
  }
  return h / tr;
}

/// ln Tr[M_R^dag M_R rho0] by the explicit product of all 2n operators,
/// with no rescaling. Usable for short records only.
inline double explicit_kraus_log_likelihood(const ctom::DensityMatrix& rho0,
                                            const ctom::MeasurementRecord& rec) {
  const int dim = rec.control.dim();
  const Matrix u = ctom::unitary_step(ctom::build_hamiltonian(rec.control), rec.config.dt);
  Matrix m = Matrix::Identity(dim, dim);
  for (double r : rec.readouts) {
    m = u * ctom::measurement_operator(r, rec.config, dim) * m;
  }
  const double tr = (m.adjoint() * m * rho0.matrix()).trace().real();
  return std::log(tr);
}

/// Deterministic record-averaged evolution: exact per-step dephasing of the
/// cross blocks of the measured observable (factor e^{-dt/2tau}) followed by
/// the unitary, iterated n_steps times.
inline ctom::DensityMatrix dephased_mean_evolution(const ctom::DensityMatrix& rho0,
                                                   const ctom::ControlSetting& control,
                                                   const ctom::MeasurementConfig& config) {
  const int dim = rho0.dim();
  const Matrix u = ctom::unitary_step(ctom::build_hamiltonian(control), config.dt);
  const double f = std::exp(-config.dt / (2.0 * config.tau));
  Matrix rho = rho0.matrix();
  for (int k = 0; k < config.n_steps; ++k) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if ((i < dim / 2) != (j < dim / 2)) rho(i, j) *= f;
    rho = u * rho * u.adjoint();
  }
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return ctom::DensityMatrix(std::move(rho));
}

/// Uniform draw from the Bloch ball by rejection; the flat ball measure is
/// the Hilbert-Schmidt measure for a single qubit.
inline Eigen::Vector3d rejection_bloch_ball(ctom::Rng& rng) {
  while (true) {
    const Eigen::Vector3d v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (v.squaredNorm() <= 1.0) return v;
  }
}

inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

inline double ks_pvalue(double d, std::size_t n1, std::size_t n2) {
  const double ne = double(n1) * double(n2) / double(n1 + n2);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    q += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(q, 0.0, 1.0);
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / double(v.size() - 1);
}

/// Least-squares slope of ln(y) against ln(x).
inline double fit_power_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ctom_test
