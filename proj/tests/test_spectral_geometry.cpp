#include <numbers>

#include "support.hpp"

using namespace hitchin;
using testing::close;
using testing::close_rel;
using testing::error_kind;

namespace {

SpectralCurve spectral_of(const testing::Scenario& sc) { return SpectralCurve(sc.curve, sc.layout, sc.H); }

std::vector<Complex> circle(Complex centre, double radius, int vertices, double phase = 0.0) {
  std::vector<Complex> w;
  for (int k = 0; k <= vertices; ++k) {
    w.push_back(centre + std::polar(radius, phase + 2 * std::numbers::pi * k / vertices));
  }
  w.back() = w.front();
  return w;
}

SpectralPoint on_curve(const SpectralCurve& sc, Complex x, int root = 0) {
  const Complex y = principal_y(sc.base(), x);
  return {x, y, sc.lambda_roots({x, y})(root)};
}

}  // namespace

TEST_CASE("densities of the rank one family") {
  const HyperellipticCurve c = testing::quintic_plus_one();
  const CoefficientLayout a1(testing::spec(Series::A, 1), 2);
  const HamiltonianVector H = testing::hvec({-1, 0.5, 2});
  const Complex x(2.0), y = principal_y(c, x);
  const Complex lambda = lambda_roots(a1, H, {x, y})(0);
  const SpectralPoint p{x, y, lambda};
  CHECK(close_rel(differential_value(a1[0], c, a1, H, p), 1.0 / (2.0 * lambda * y), 1e-14));
  CHECK(close_rel(differential_value(a1[2], c, a1, H, p), 2.0 / (lambda * y), 1e-14));
  const Eigen::VectorXcd all = differential_values(a1, H, p);
  CHECK(all.size() == 3);
  CHECK(close_rel(all(1), x / (2.0 * lambda * y), 1e-14));

  const HyperellipticCurve c3 = random_curve(3, 2);
  const CoefficientLayout a1g3(testing::spec(Series::A, 1), 3);
  const HamiltonianVector H3 = random_hamiltonians(a1g3, 2);
  const Complex y3 = principal_y(c3, x);
  const SpectralPoint q{x, y3, lambda_roots(a1g3, H3, {x, y3})(1)};
  CHECK(close_rel(differential_value(a1g3[5], c3, a1g3, H3, q), 1.0 / (2.0 * q.lambda), 1e-14));

  CHECK(error_kind([&] { differential_values(a1, H, {x, y, 0.0}); }) == ErrorKind::OnRamification);
  CHECK(error_kind([&] { differential_values(a1, H, {-1.0, 0.0, 1.0}); }) == ErrorKind::OnRamification);
}

TEST_CASE("one differential per Hamiltonian") {
  for (const Series s : {Series::A, Series::B, Series::C}) {
    for (int rank = 1; rank <= 3; ++rank) {
      const auto sc = testing::scenario(s, rank, 2, 1);
      CHECK(differential_values(sc.layout, sc.H, sc.config.points[0]).size() == sc.layout.size());
    }
  }
}

TEST_CASE("discriminant vanishes exactly where lambda roots meet") {
  for (const Series s : {Series::A, Series::C}) {
    const auto sc = testing::scenario(s, 2, 2, 3);
    const SheetPoint p = sc.config.points[0].sheet();
    const Eigen::VectorXcd l = lambda_roots(sc.layout, sc.H, p);
    Complex product = 1.0;
    if (s == Series::A) {
      for (Eigen::Index i = 0; i < l.size(); ++i)
        for (Eigen::Index j = i + 1; j < l.size(); ++j) product *= (l(i) - l(j)) * (l(i) - l(j));
    } else {
      // lambda^4 + r1 lambda^2 + r2 = S(lambda^2): S(0) disc(S) = nu1 nu2 (nu1 - nu2)^2
      std::vector<Complex> nu;
      for (Eigen::Index i = 0; i < l.size(); ++i) {
        const Complex v = l(i) * l(i);
        bool seen = false;
        for (const Complex w : nu) seen = seen || std::abs(w - v) < 1e-8 * (1 + std::abs(v));
        if (!seen) nu.push_back(v);
      }
      REQUIRE(nu.size() == 2);
      product = nu[0] * nu[1] * (nu[0] - nu[1]) * (nu[0] - nu[1]);
    }
    const Complex disc = lambda_discriminant(sc.layout, sc.H, p);
    CHECK(std::abs(std::abs(disc) - std::abs(product)) < 1e-9 * std::abs(product));
  }
}

TEST_CASE("rank one projections are the zeros of the invariant") {
  const HyperellipticCurve c = random_curve(2, 31);
  const CoefficientLayout a1(testing::spec(Series::A, 1), 2);
  const HamiltonianVector H = random_hamiltonians(a1, 32);
  const auto& h = H.values;
  const Complex root = std::sqrt(h(1) * h(1) - 4.0 * h(2) * h(0));
  const std::vector<Complex> expected{(-h(1) + root) / (2.0 * h(2)), (-h(1) - root) / (2.0 * h(2))};
  const std::vector<Complex> found = spectral_branch_projections(c, a1, H);
  CHECK(found.size() == 2);
  for (const Complex e : expected) {
    double best = 1e300;
    for (const Complex f : found) best = std::min(best, std::abs(f - e));
    CHECK(best < 1e-8);
  }
  const SpectralCurve sc(c, a1, H);
  CHECK(sc.obstacles().size() == 5 + found.size());
}

TEST_CASE("continuation around a loop with no branch point inside") {
  const auto sc_data = testing::scenario(Series::A, 2, 2, 5);
  const SpectralCurve sc = spectral_of(sc_data);
  const SpectralPoint start = sc_data.config.points[0];
  const double r = 0.4 * sc.distance_to_obstacles(start.x);
  const std::vector<Complex> loop = circle(start.x - r, r, 24);
  const auto chain = continue_path(sc, {loop, start});
  CHECK(close(chain.back().y, start.y, 1e-9));
  CHECK(close(chain.back().lambda, start.lambda, 1e-9));
}

TEST_CASE("lambda is exchanged around a spectral branch point") {
  const HyperellipticCurve c = random_curve(2, 31);
  const CoefficientLayout a1(testing::spec(Series::A, 1), 2);
  const SpectralCurve sc(c, a1, random_hamiltonians(a1, 32));
  const Complex centre = sc.spectral_branch_projections().front();
  double others = 1e300;
  for (const Complex o : sc.obstacles()) {
    if (o != centre) others = std::min(others, std::abs(o - centre));
  }
  const std::vector<Complex> loop = circle(centre, 0.3 * others, 48);
  const SpectralPoint start = on_curve(sc, loop.front());
  const auto chain = continue_path(sc, {loop, start});
  CHECK(close(chain.back().y, start.y, 1e-9));
  CHECK(close(chain.back().lambda, -start.lambda, 1e-9));
}

TEST_CASE("continuation follows the closed-form branch lambda = x") {
  const HyperellipticCurve c = testing::quintic_plus_one();
  const CoefficientLayout a1(testing::spec(Series::A, 1), 2);
  const SpectralCurve sc(c, a1, testing::hvec({0, 0, -1}));
  const SpectralPoint start{1.0, principal_y(c, 1.0), 1.0};
  for (const std::vector<Complex>& w :
       {std::vector<Complex>{1.0, 3.0}, std::vector<Complex>{1.0, Complex(2.0, 1.5), Complex(-0.5, 2.5)}}) {
    const auto chain = continue_path(sc, {w, start});
    CHECK(chain.size() >= w.size());
    double worst = 0.0;
    for (const SpectralPoint& p : chain) worst = std::max(worst, std::abs(p.lambda - p.x));
    CHECK(worst < 1e-10);
    CHECK(close(chain.back().x, w.back(), 0.0));
  }
}

TEST_CASE("continuation into a base branch point fails") {
  const HyperellipticCurve c = testing::quintic_plus_one();
  const CoefficientLayout a1(testing::spec(Series::A, 1), 2);
  const SpectralCurve sc(c, a1, testing::hvec({-1, 0, 0}));
  const SpectralPoint start{-1.5, principal_y(c, -1.5), 1.0};
  CHECK(error_kind([&] { continue_path(sc, {{-1.5, -0.5}, start}); }) == ErrorKind::SheetAmbiguity);
  CHECK(error_kind([&] { continue_path(sc, {{-1.5, -1.5}, start}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("path integrals") {
  const auto data = testing::scenario(Series::A, 2, 2, 2);
  const SpectralCurve sc = spectral_of(data);
  const SpectralPoint a = data.config.points[0];
  const double r = sc.distance_to_obstacles(a.x);
  const Complex b = a.x + 0.5 * r;

  SUBCASE("zero-length path") {
    const PathIntegral none = integrate_path(sc, {{a.x}, a}, 1e-10);
    CHECK(none.value.size() == data.layout.size());
    CHECK(none.value.norm() == 0.0);
  }

  const PathIntegral forward = integrate_path(sc, {{a.x, b}, a}, 1e-12);

  SUBCASE("reversal negates") {
    const PathIntegral back = integrate_path(sc, {{b, a.x}, forward.end}, 1e-12);
    CHECK((forward.value + back.value).norm() < 1e-10 * (1 + forward.value.norm()));
    CHECK(close(back.end.lambda, a.lambda, 1e-10));
  }

  SUBCASE("homotopic polylines agree") {
    const Complex m = a.x + Complex(0.25, 0.2) * r;
    const PathIntegral bent = integrate_path(sc, {{a.x, m, b}, a}, 1e-12);
    CHECK((bent.value - forward.value).norm() < 1e-7);
  }

  SUBCASE("derivative in the endpoint is the density") {
    const double eps = 1e-4 * std::max(1.0, std::abs(b));
    const Eigen::VectorXcd plus = integrate_path(sc, {{a.x, b + eps}, a}, 1e-13).value;
    const Eigen::VectorXcd minus = integrate_path(sc, {{a.x, b - eps}, a}, 1e-13).value;
    const Eigen::VectorXcd fd = (plus - minus) / (2 * eps);
    const Eigen::VectorXcd density = differential_values(data.layout, data.H, forward.end);
    CHECK((fd - density).cwiseAbs().maxCoeff() < 1e-5 * std::max(1.0, density.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("angle coordinates") {
  const auto data = testing::scenario(Series::A, 1, 2, 4);
  const AngleResult fine = angle_coordinates(data.config, {.quad_tol = 5e-10});
  const AngleResult coarse = angle_coordinates(data.config, {.quad_tol = 1e-9});
  CHECK(fine.angles.values.size() == 3);
  CHECK((fine.angles.values - coarse.angles.values).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(relative_difference(fine.hamiltonians.values, data.H.values) < 1e-10);

  const SpectralCurve sc = spectral_of(data);
  const SpectralPoint base = base_point(sc);
  CHECK(close(base.x, 3.0 * (1.0 + data.curve.max_branch_modulus()), 0.0));
  CHECK(base.y.real() > 0);
  for (Eigen::Index k = 0; k < 2; ++k) CHECK(sc.lambda_roots(base.sheet())(k).real() <= base.lambda.real() + 1e-14);
  CHECK(close(fine.angles.base_point.lambda, base.lambda, 1e-12));

  // the angles are the sum of the planned path integrals
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(3);
  for (std::size_t i = 0; i < fine.plans.size(); ++i) {
    const PathIntegral leg = integrate_path(sc, {fine.plans[i].waypoints, base}, 5e-10);
    CHECK(close(leg.end.lambda, data.config.points[i].lambda, 1e-7));
    sum += leg.value;
  }
  CHECK((sum - fine.angles.values).norm() < 1e-12 * (1 + sum.norm()));

  const AngleVector un = unnormalized_sl2_angles(fine.angles, data.layout);
  CHECK((un.values - 2.0 * fine.angles.values).norm() == 0.0);
  const auto a2 = testing::scenario(Series::A, 2, 2, 4);
  CHECK(error_kind([&] { unnormalized_sl2_angles(fine.angles, a2.layout); }) == ErrorKind::InvalidInput);
}

TEST_CASE("densities stay bounded in the lambda chart at a spectral branch point") {
  const HyperellipticCurve c = random_curve(2, 31);
  const CoefficientLayout a1(testing::spec(Series::A, 1), 2);
  const HamiltonianVector H = random_hamiltonians(a1, 32);
  const SpectralCurve sc(c, a1, H);
  const auto branch = locate_spectral_branch_point(sc, sc.spectral_branch_projections().front());
  REQUIRE(branch.has_value());
  CHECK(std::abs(sc.R(*branch)) < 1e-10);
  CHECK(std::abs(sc.dR_dlambda(*branch)) < 1e-8);

  const Complex eps0 = 1e-2 * (1.0 + std::abs(branch->lambda));
  const Eigen::VectorXcd first = lambda_chart_densities(sc, *branch, eps0);
  for (int k = 1; k < 8; ++k) {
    const Eigen::VectorXcd v = lambda_chart_densities(sc, *branch, eps0 * std::pow(0.5, k));
    for (Eigen::Index j = 0; j < v.size(); ++j) CHECK(std::abs(v(j)) <= 10.0 * std::max(std::abs(first(j)), 1e-6));
  }

  // the same forms against dx blow up like |x - x_b|^{-1/2}
  auto raw = [&](double delta) {
    const Complex x = branch->x + delta;
    const Complex y = y_continuation_step(c, branch->sheet(), x).y;
    const Eigen::VectorXcd roots = lambda_roots(a1, H, {x, y});
    const Complex l = std::abs(roots(0) - branch->lambda) < std::abs(roots(1) - branch->lambda) ? roots(0) : roots(1);
    return differential_values(a1, H, {x, y, l}).cwiseAbs().maxCoeff();
  };
  CHECK(raw(1e-10) > 100.0 * raw(1e-4));
}
