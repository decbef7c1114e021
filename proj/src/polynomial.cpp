#include "hitchin/polynomial.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hitchin/error.hpp"

namespace hitchin {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool residuals_ok(const Eigen::VectorXcd& coeffs, const Eigen::VectorXcd& roots, double tol) {
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    if (!std::isfinite(roots(k).real()) || !std::isfinite(roots(k).imag())) return false;
    if (relative_residual(coeffs, roots(k)) > tol) return false;
  }
  return true;
}

// Newton polishing that only keeps an update when it lowers the residual.
void polish(const Eigen::VectorXcd& coeffs, Eigen::VectorXcd& roots) {
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    for (int it = 0; it < 3; ++it) {
      const auto pv = horner_derivatives(coeffs, roots(k));
      if (pv.first == Complex(0)) break;
      const Complex candidate = roots(k) - pv.value / pv.first;
      if (std::abs(horner(coeffs, candidate)) < std::abs(pv.value)) {
        roots(k) = candidate;
      } else {
        break;
      }
    }
  }
}

Eigen::VectorXcd aberth(const Eigen::VectorXcd& monic, int max_iterations) {
  const Eigen::Index degree = monic.size() - 1;
  double radius = std::pow(std::abs(monic(0)), 1.0 / static_cast<double>(degree));
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    // zero constant term: use the largest |a_k|^(1/(d-k)) as a radius guess
    radius = 0.0;
    for (Eigen::Index k = 0; k < degree; ++k) {
      radius = std::max(radius, std::pow(std::abs(monic(k)), 1.0 / static_cast<double>(degree - k)));
    }
    if (radius == 0.0) radius = 1.0;
  }

  Eigen::VectorXcd z(degree);
  for (Eigen::Index k = 0; k < degree; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) + 0.4;
    z(k) = std::polar(radius, angle);
  }

  std::vector<bool> done(static_cast<std::size_t>(degree), false);
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (Eigen::Index k = 0; k < degree; ++k) {
      if (done[static_cast<std::size_t>(k)]) continue;
      const auto pv = horner_derivatives(monic, z(k));
      const double scale = horner_scale(monic, std::abs(z(k)));
      if (std::abs(pv.value) <= 4.0 * kEps * scale) {
        done[static_cast<std::size_t>(k)] = true;
        continue;
      }
      all_done = false;
      Complex repulsion(0.0);
      for (Eigen::Index j = 0; j < degree; ++j) {
        if (j != k) repulsion += 1.0 / (z(k) - z(j));
      }
      const Complex ratio = pv.first == Complex(0) ? Complex(1e-3) : pv.value / pv.first;
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z(k) -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(z(k))) done[static_cast<std::size_t>(k)] = true;
    }
    if (all_done) break;
  }
  return z;
}

}  // namespace

double relative_residual(const Eigen::VectorXcd& coeffs, Complex z) {
  const double scale = horner_scale(coeffs, std::abs(z));
  if (scale == 0.0) return 0.0;
  return std::abs(horner(coeffs, z)) / scale;
}

Eigen::VectorXcd companion_roots(const Eigen::VectorXcd& coeffs) {
  const Eigen::Index degree = coeffs.size() - 1;
  if (degree < 1) return {};
  const Complex lead = coeffs(degree);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (Eigen::Index j = 0; j < degree; ++j) companion(0, j) = -coeffs(degree - 1 - j) / lead;
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::RootSolveFailure, "companion eigenvalue iteration failed");
  }
  return solver.eigenvalues();
}

Eigen::VectorXcd polynomial_roots(const Eigen::VectorXcd& coeffs, const RootOptions& options) {
  const Eigen::Index degree = coeffs.size() - 1;
  if (degree < 1) return {};
  const Complex lead = coeffs(degree);
  if (lead == Complex(0)) {
    throw Error(ErrorKind::InvalidInput, "polynomial_roots: leading coefficient is zero");
  }
  // exact roots at zero are split off first
  Eigen::Index zeros = 0;
  while (coeffs(zeros) == Complex(0)) ++zeros;
  if (zeros > 0) {
    Eigen::VectorXcd roots = Eigen::VectorXcd::Zero(degree);
    const Eigen::VectorXcd rest = coeffs.tail(coeffs.size() - zeros);
    if (rest.size() > 1) roots.tail(rest.size() - 1) = polynomial_roots(rest, options);
    return roots;
  }
  if (degree == 1) {
    Eigen::VectorXcd r(1);
    r(0) = -coeffs(0) / lead;
    return r;
  }

  const Eigen::VectorXcd monic = coeffs / lead;
  Eigen::VectorXcd roots = aberth(monic, options.max_iterations);
  polish(monic, roots);
  if (residuals_ok(monic, roots, options.tolerance)) return roots;

  roots = companion_roots(coeffs);
  polish(monic, roots);
  if (residuals_ok(monic, roots, options.tolerance)) return roots;

  throw Error(ErrorKind::RootSolveFailure,
              "no root set met relative residual " + std::to_string(options.tolerance) +
                  " (degree " + std::to_string(degree) + ")");
}

}  // namespace hitchin
