#include "hitchin/base_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hitchin/error.hpp"

namespace hitchin {

HyperellipticCurve::HyperellipticCurve(int genus, Eigen::VectorXcd coeffs)
    : genus_(genus), coeffs_(std::move(coeffs)) {
  if (genus_ < 2) {
    throw Error(ErrorKind::InvalidInput, "genus must be >= 2, got " + std::to_string(genus_));
  }
  if (coeffs_.size() != 2 * genus_ + 1) {
    throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(2 * genus_ + 1) +
                                             " coefficients a_0..a_{2g}, got " +
                                             std::to_string(coeffs_.size()));
  }
  for (Eigen::Index k = 0; k < coeffs_.size(); ++k) {
    if (!std::isfinite(coeffs_(k).real()) || !std::isfinite(coeffs_(k).imag())) {
      throw Error(ErrorKind::InvalidInput, "non-finite curve coefficient");
    }
  }
  polynomial_.resize(coeffs_.size() + 1);
  polynomial_.head(coeffs_.size()) = coeffs_;
  polynomial_(coeffs_.size()) = 1.0;

  branch_points_ = polynomial_roots(polynomial_);
  max_branch_modulus_ = branch_points_.cwiseAbs().maxCoeff();
  separation_tolerance_ = 1e-8 * (1.0 + max_branch_modulus_);
  // An exact double root comes back split by about sqrt(eps), so a vanishing
  // P' at a computed root counts as a repeated root too.
  Eigen::VectorXcd derivative(polynomial_.size() - 1);
  for (Eigen::Index k = 1; k < polynomial_.size(); ++k) derivative(k - 1) = static_cast<double>(k) * polynomial_(k);
  for (Eigen::Index i = 0; i < branch_points_.size(); ++i) {
    const Complex r = branch_points_(i);
    bool repeated = std::abs(horner(derivative, r)) <= 1e-7 * horner_scale(derivative, std::abs(r));
    for (Eigen::Index j = i + 1; j < branch_points_.size(); ++j) {
      repeated = repeated || std::abs(r - branch_points_(j)) <= separation_tolerance_;
    }
    if (repeated) {
      throw Error(ErrorKind::DegenerateCurve, "P has a repeated root near (" + std::to_string(r.real()) + ", " +
                                                  std::to_string(r.imag()) + ")");
    }
  }
}

double HyperellipticCurve::distance_to_branch_points(Complex x) const {
  return (branch_points_.array() - x).abs().minCoeff();
}

Complex evaluate_P(const HyperellipticCurve& curve, Complex x) { return curve.evaluate(x); }

Eigen::VectorXcd branch_points(const HyperellipticCurve& curve) { return curve.branch_points(); }

double sheet_residual(const HyperellipticCurve& curve, const SheetPoint& point) {
  const double scale = std::norm(point.y) + curve.scale(point.x);
  return std::abs(point.y * point.y - curve.evaluate(point.x)) / scale;
}

Complex principal_y(const HyperellipticCurve& curve, Complex x) {
  Complex y = std::sqrt(curve.evaluate(x));
  if (y.real() < 0.0 || (y.real() == 0.0 && y.imag() < 0.0)) y = -y;
  return y;
}

SheetPoint y_continuation_step(const HyperellipticCurve& curve, const SheetPoint& from, Complex x_next) {
  if (std::abs(from.y) == 0.0) {
    throw Error(ErrorKind::SheetAmbiguity, "continuation started on a branch point (y = 0)");
  }
  const Complex dx = x_next - from.x;
  const auto pv = curve.evaluate_derivatives(from.x);
  const Complex y = from.y;
  const Complex dy = pv.first / (2.0 * y);
  const Complex d2y = pv.second / (2.0 * y) - pv.first * pv.first / (4.0 * y * y * y);
  const Complex predictor = y + dy * dx;

  const Complex root = std::sqrt(curve.evaluate(x_next));
  const Complex chosen = std::abs(root - predictor) <= std::abs(-root - predictor) ? root : -root;

  const double taylor = 0.5 * std::norm(dx) * std::abs(d2y);
  const double error_bound =
      2.0 * std::max(taylor, std::abs(chosen - predictor)) +
      8.0 * std::numeric_limits<double>::epsilon() * std::abs(y);
  if (2.0 * std::abs(root) < 2.0 * error_bound) {
    throw Error(ErrorKind::SheetAmbiguity, "candidate y roots too close; step too near a branch point");
  }
  return {x_next, chosen};
}

SheetPoint continue_y(const HyperellipticCurve& curve, const SheetPoint& from, Complex x_end,
                      double step_fraction) {
  SheetPoint current = from;
  const double min_step = 1e-13 * (1.0 + std::abs(x_end));
  while (current.x != x_end) {
    const double remaining = std::abs(x_end - current.x);
    double step = std::min(remaining, step_fraction * curve.distance_to_branch_points(current.x));
    for (;;) {
      if (step < min_step) {
        throw Error(ErrorKind::SheetAmbiguity, "path runs into a branch point of the base curve");
      }
      const Complex target = step >= remaining ? x_end : current.x + (x_end - current.x) * (step / remaining);
      try {
        current = y_continuation_step(curve, current, target);
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SheetAmbiguity) throw;
        step *= 0.5;
      }
    }
  }
  return current;
}

SheetPoint continue_y_along(const HyperellipticCurve& curve, const SheetPoint& from,
                            std::span<const Complex> waypoints, double step_fraction) {
  SheetPoint current = from;
  for (std::size_t k = 1; k < waypoints.size(); ++k) {
    current = continue_y(curve, current, waypoints[k], step_fraction);
  }
  return current;
}

}  // namespace hitchin
