#pragma once

#include <span>

#include <Eigen/Dense>

namespace ctom {

/// Pairwise (tree) summation. Order-fixed, so reductions are reproducible
/// to the last bit regardless of how callers parallelize around them.
double pairwise_sum(std::span<const double> values);

/// log(sum(exp(v))) guarded against overflow; -inf iff all entries are -inf.
double log_sum_exp(const Eigen::VectorXd& v);

/// Composite Simpson weights on [0, length] with `intervals` (even) panels.
Eigen::VectorXd simpson_weights(int intervals, double length);

}  // namespace ctom
