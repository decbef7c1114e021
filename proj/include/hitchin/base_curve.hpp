#pragma once

#include <span>

#include "hitchin/polynomial.hpp"

namespace hitchin {

/// A point (x, y) on y^2 = P(x) with an explicit sheet choice for y.
struct SheetPoint {
  Complex x;
  Complex y;
};

/// The hyperelliptic base curve y^2 = P(x), P monic of degree 2g+1.
///
/// Stores a_0..a_{2g}; the leading coefficient 1 is implicit. Construction
/// computes the branch points and rejects curves with g < 2 or with two
/// roots of P closer than the separation tolerance 1e-8 (1 + max|root|).
class HyperellipticCurve {
 public:
  HyperellipticCurve(int genus, Eigen::VectorXcd coeffs);

  int genus() const noexcept { return genus_; }
  int degree() const noexcept { return 2 * genus_ + 1; }

  /// a_0..a_{2g}
  const Eigen::VectorXcd& coeffs() const noexcept { return coeffs_; }
  /// a_0..a_{2g}, 1
  const Eigen::VectorXcd& polynomial() const noexcept { return polynomial_; }

  const Eigen::VectorXcd& branch_points() const noexcept { return branch_points_; }
  double max_branch_modulus() const noexcept { return max_branch_modulus_; }
  double separation_tolerance() const noexcept { return separation_tolerance_; }

  Complex evaluate(Complex x) const { return horner(polynomial_, x); }
  PolynomialValue<Complex> evaluate_derivatives(Complex x) const {
    return horner_derivatives(polynomial_, x);
  }
  /// sum_k |c_k| |x|^k
  double scale(Complex x) const { return horner_scale(polynomial_, std::abs(x)); }

  double distance_to_branch_points(Complex x) const;

 private:
  int genus_;
  Eigen::VectorXcd coeffs_;
  Eigen::VectorXcd polynomial_;
  Eigen::VectorXcd branch_points_;
  double max_branch_modulus_ = 0.0;
  double separation_tolerance_ = 0.0;
};

Complex evaluate_P(const HyperellipticCurve& curve, Complex x);

/// The 2g+1 finite branch points (roots of P). The point at infinity is
/// implicit and not listed.
Eigen::VectorXcd branch_points(const HyperellipticCurve& curve);

/// |y^2 - P(x)| / (|y|^2 + scale(P, x))
double sheet_residual(const HyperellipticCurve& curve, const SheetPoint& point);

/// The square root of P(x) with positive real part (positive imaginary part
/// on the cut).
Complex principal_y(const HyperellipticCurve& curve, Complex x);

/// One continuation step of y from `from` to `x_next`: picks the root of
/// P(x_next) nearest the first-order predictor y + P'(x)/(2y) dx. Throws
/// SheetAmbiguity when the two candidate roots are closer than twice the
/// predictor error bound.
SheetPoint y_continuation_step(const HyperellipticCurve& curve, const SheetPoint& from, Complex x_next);

/// Continues y along the straight segment from.x -> x_end with steps bounded
/// by `step_fraction` times the distance to the nearest branch point.
SheetPoint continue_y(const HyperellipticCurve& curve, const SheetPoint& from, Complex x_end,
                      double step_fraction = 0.25);

/// Continues y along a polyline; waypoints[0] is taken to be from.x.
SheetPoint continue_y_along(const HyperellipticCurve& curve, const SheetPoint& from,
                            std::span<const Complex> waypoints, double step_fraction = 0.25);

}  // namespace hitchin
