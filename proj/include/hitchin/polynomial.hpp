#pragma once

#include <complex>

#include <Eigen/Dense>

namespace hitchin {

using Complex = std::complex<double>;

/// Horner evaluation of sum_k c(k) x^k (coefficients in ascending order).
template <typename Scalar, typename Derived>
Scalar horner(const Eigen::DenseBase<Derived>& c, const Scalar& x) {
  Scalar acc(0);
  for (Eigen::Index k = c.size(); k-- > 0;) acc = acc * x + Scalar(c(k));
  return acc;
}

template <typename Scalar>
struct PolynomialValue {
  Scalar value{0};
  Scalar first{0};
  Scalar second{0};
};

/// Value together with first and second derivative, by nested Horner.
template <typename Scalar, typename Derived>
PolynomialValue<Scalar> horner_derivatives(const Eigen::DenseBase<Derived>& c, const Scalar& x) {
  PolynomialValue<Scalar> out;
  for (Eigen::Index k = c.size(); k-- > 0;) {
    out.second = out.second * x + Scalar(2) * out.first;
    out.first = out.first * x + out.value;
    out.value = out.value * x + Scalar(c(k));
  }
  return out;
}

/// sum_k |c_k| |x|^k; the natural scale for residuals of a polynomial at x.
template <typename Derived>
double horner_scale(const Eigen::DenseBase<Derived>& c, double abs_x) {
  double acc = 0.0;
  for (Eigen::Index k = c.size(); k-- > 0;) acc = acc * abs_x + std::abs(c(k));
  return acc;
}

struct RootOptions {
  /// Required relative residual |p(z)| / sum |c_k||z|^k for every root.
  double tolerance = 1e-12;
  int max_iterations = 400;
};

/// All complex roots of the polynomial with ascending coefficients `coeffs`.
/// The leading coefficient must be nonzero. Aberth-Ehrlich simultaneous
/// iteration with a companion-matrix fallback; throws RootSolveFailure if
/// neither meets the residual tolerance.
Eigen::VectorXcd polynomial_roots(const Eigen::VectorXcd& coeffs, const RootOptions& options = {});

/// Eigenvalues of the companion matrix; no residual verification.
Eigen::VectorXcd companion_roots(const Eigen::VectorXcd& coeffs);

double relative_residual(const Eigen::VectorXcd& coeffs, Complex z);

}  // namespace hitchin
