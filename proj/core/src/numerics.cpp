#include "ctom/numerics.hpp"

#include <cmath>
#include <limits>

#include "ctom/common.hpp"

namespace ctom {

namespace {

double pairwise_sum_impl(const double* data, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf (or a stray +inf/nan propagates)
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

Eigen::VectorXd simpson_weights(int intervals, double length) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw ConfigError("simpson_weights: intervals must be even and >= 2");
  }
  const double h = length / intervals;
  Eigen::VectorXd w(intervals + 1);
  w[0] = w[intervals] = h / 3.0;
  for (int i = 1; i < intervals; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  return w;
}

}  // namespace ctom
