#include <random>

#include "support.hpp"
#include "hitchin/quadrature.hpp"

using namespace hitchin;

namespace {

// ascending coefficients of prod (x - r_k)
Eigen::VectorXcd from_roots(const Eigen::VectorXcd& roots) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(roots.size() + 1);
  c(0) = 1;
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(c.size());
    for (Eigen::Index j = 0; j <= k; ++j) {
      next(j + 1) += c(j);
      next(j) -= roots(k) * c(j);
    }
    c = next;
  }
  return c;
}

double match_distance(const Eigen::VectorXcd& found, const Eigen::VectorXcd& expected) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < expected.size(); ++k) {
    double best = 1e300;
    for (Eigen::Index j = 0; j < found.size(); ++j) best = std::min(best, std::abs(found(j) - expected(k)));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("roots of polynomials built from known roots") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd roots(7);
    for (Eigen::Index k = 0; k < roots.size(); ++k) roots(k) = {u(rng), u(rng)};
    const Eigen::VectorXcd found = polynomial_roots(from_roots(roots));
    CHECK(found.size() == 7);
    CHECK(match_distance(found, roots) < 1e-9);
  }
}

TEST_CASE("fifth roots of -1") {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(6);
  c(0) = 1;
  c(5) = 1;
  const Eigen::VectorXcd r = polynomial_roots(c);
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    CHECK(std::abs(std::pow(r(k), 5) + 1.0) < 1e-13);
    CHECK(relative_residual(c, r(k)) < 1e-12);
  }
  CHECK(match_distance(companion_roots(c), r) < 1e-12);
}

TEST_CASE("zero roots are found exactly enough") {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(4);
  c(3) = 1;  // x^3
  const Eigen::VectorXcd r = polynomial_roots(c);
  for (Eigen::Index k = 0; k < r.size(); ++k) CHECK(std::abs(r(k)) < 1e-10);
}

TEST_CASE("nested Horner derivatives match finite differences") {
  Eigen::VectorXcd c(5);
  c << Complex(1, 2), Complex(-3, 0.5), Complex(0.25, -1), Complex(2, 0), Complex(-1, 1);
  const Complex x(0.7, -0.4);
  const auto v = horner_derivatives(c, x);
  CHECK(testing::close(v.value, horner(c, x), 1e-14));
  const double h = 1e-5;
  const Complex fd1 = (horner(c, x + h) - horner(c, x - h)) / (2 * h);
  const Complex fd2 = (horner(c, x + h) - 2.0 * horner(c, x) + horner(c, x - h)) / (h * h);
  CHECK(testing::close(v.first, fd1, 1e-8));
  CHECK(testing::close(v.second, fd2, 1e-4));
}

TEST_CASE("adaptive Gauss-Kronrod on known integrals") {
  auto expo = [](double t) {
    Eigen::VectorXcd v(2);
    v << std::exp(t), Complex(std::cos(t), std::sin(t));
    return v;
  };
  const QuadratureResult r = integrate_gk15(expo, 0.0, 1.0, 1e-12);
  CHECK(std::abs(r.value(0) - (std::exp(1.0) - 1.0)) < 1e-13);
  // int_0^1 e^{it} dt = (e^i - 1) / i
  const Complex exact = (std::exp(Complex(0, 1)) - 1.0) / Complex(0, 1);
  CHECK(std::abs(r.value(1) - exact) < 1e-13);

  auto root = [](double t) { return Eigen::VectorXcd::Constant(1, std::sqrt(t)); };
  const QuadratureResult s = integrate_gk15(root, 0.0, 1.0, 1e-10);
  CHECK(std::abs(s.value(0) - 2.0 / 3.0) < 1e-9);
  CHECK(s.evaluations > 15);

  auto reversed = integrate_gk15(expo, 1.0, 0.0, 1e-12);
  CHECK(std::abs(reversed.value(0) + r.value(0)) < 1e-13);
}

TEST_CASE("divergent integrand exhausts the bisection budget") {
  auto pole = [](double t) { return Eigen::VectorXcd::Constant(1, 1.0 / t); };
  CHECK(testing::error_kind([&] { integrate_gk15(pole, 0.0, 1.0, 1e-12, 12); }) == ErrorKind::QuadratureFailure);
}
