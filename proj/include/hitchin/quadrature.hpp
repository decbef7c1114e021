#pragma once

#include <functional>

#include <Eigen/Dense>

namespace hitchin {

struct QuadratureResult {
  Eigen::VectorXcd value;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) for a vector-valued integrand on [a, b].
/// Bisects the panel with the largest |K15 - G7|_inf until the summed
/// estimate is below `abs_tol`; throws QuadratureFailure when a panel would
/// need more than `max_depth` bisections.
QuadratureResult integrate_gk15(const std::function<Eigen::VectorXcd(double)>& f, double a, double b,
                                double abs_tol, int max_depth = 30);

}  // namespace hitchin
