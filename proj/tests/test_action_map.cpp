#include <algorithm>
#include <numbers>

#include "support.hpp"

using namespace hitchin;
using testing::close;

namespace {

PhaseConfiguration three_points(const std::vector<Complex>& lambdas) {
  const HyperellipticCurve c = testing::quintic_plus_one();
  std::vector<SpectralPoint> pts;
  for (int k = 0; k < 3; ++k) {
    const Complex x(k);
    pts.push_back({x, principal_y(c, x), lambdas[static_cast<std::size_t>(k)]});
  }
  return make_configuration(c, testing::spec(Series::A, 1), pts);
}

}  // namespace

TEST_CASE("linear system rows") {
  const PhaseConfiguration config = three_points({1, 1, 1});
  const LinearSystem sys = assemble_system(config);
  Eigen::MatrixXcd vandermonde(3, 3);
  vandermonde << 1, 0, 0, 1, 1, 1, 1, 2, 4;
  CHECK((sys.matrix - vandermonde).norm() == 0.0);
  CHECK((sys.rhs + Eigen::VectorXcd::Ones(3)).norm() == 0.0);

  const auto sc = testing::scenario(Series::A, 1, 3, 2);
  const LinearSystem s3 = assemble_system(sc.config);
  for (int i = 0; i < 6; ++i) {
    const SpectralPoint& p = sc.config.points[static_cast<std::size_t>(i)];
    for (int k = 0; k < 5; ++k) CHECK(close(s3.matrix(i, k), std::pow(p.x, k), 1e-13 * std::pow(std::abs(p.x), k)));
    CHECK(close(s3.matrix(i, 5), p.y, 0.0));
    CHECK(close(s3.rhs(i), -p.lambda * p.lambda, 0.0));
  }
}

TEST_CASE("actions of hand-built configurations") {
  CHECK(relative_difference(solve_actions(three_points({1, 1, 1})).values, testing::hvec({-1, 0, 0}).values, 1.0) <
        1e-14);
  CHECK(relative_difference(solve_actions(three_points({0, 1, 2})).values, testing::hvec({0, 0, -1}).values, 1.0) <
        1e-14);
}

TEST_CASE("sampling and solving round trip") {
  struct Case {
    Series s;
    int rank;
    int genus;
  };
  for (const Case c : {Case{Series::A, 1, 2}, Case{Series::A, 1, 3}, Case{Series::A, 2, 2}, Case{Series::C, 2, 2}}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto sc = testing::scenario(c.s, c.rank, c.genus, seed);
      const HamiltonianVector H = solve_actions(sc.config);
      CHECK(relative_difference(H.values, sc.H.values) < 1e-10);
      if (sc.layout.size() <= 8) {
        CHECK(relative_difference(solve_actions_cramer(sc.config).values, H.values) < 1e-8);
      }
    }
  }
}

TEST_CASE("point order does not matter") {
  const auto sc = testing::scenario(Series::A, 2, 2, 3);
  const HamiltonianVector H = solve_actions(sc.config);
  PhaseConfiguration shuffled = sc.config;
  std::reverse(shuffled.points.begin(), shuffled.points.end());
  std::rotate(shuffled.points.begin(), shuffled.points.begin() + 3, shuffled.points.end());
  CHECK(relative_difference(solve_actions(shuffled).values, H.values) < 1e-12);
}

TEST_CASE("sampling special spectral curves") {
  const HyperellipticCurve c = random_curve(2, 3);
  const CoefficientLayout a1(testing::spec(Series::A, 1), 2);
  const PhaseConfiguration zero = sample_config(c, testing::spec(Series::A, 1), {Eigen::VectorXcd::Zero(3)}, 4);
  for (const SpectralPoint& p : zero.points) CHECK(std::abs(p.lambda) < 1e-12);

  SampleOptions no_check;
  no_check.verify_roundtrip = false;
  const PhaseConfiguration zero2 =
      sample_config(c, testing::spec(Series::A, 2), {Eigen::VectorXcd::Zero(8)}, 4, no_check);
  for (const SpectralPoint& p : zero2.points) CHECK(std::abs(p.lambda) < 1e-4);

  const PhaseConfiguration unit = sample_config(c, testing::spec(Series::A, 1), testing::hvec({-1, 0, 0}), 5);
  for (const SpectralPoint& p : unit.points) CHECK(std::min(std::abs(p.lambda - 1.0), std::abs(p.lambda + 1.0)) < 1e-14);
}

TEST_CASE("sampling is deterministic") {
  const auto a = testing::scenario(Series::C, 2, 2, 11);
  const auto b = testing::scenario(Series::C, 2, 2, 11);
  REQUIRE(a.config.points.size() == b.config.points.size());
  for (std::size_t k = 0; k < a.config.points.size(); ++k) {
    CHECK(a.config.points[k].x == b.config.points[k].x);
    CHECK(a.config.points[k].y == b.config.points[k].y);
    CHECK(a.config.points[k].lambda == b.config.points[k].lambda);
  }
  const auto c = testing::scenario(Series::C, 2, 2, 12);
  CHECK(c.config.points[0].x != a.config.points[0].x);
}

TEST_CASE("repeated points are singular") {
  auto sc = testing::scenario(Series::A, 1, 2, 6);
  sc.config.points[1] = sc.config.points[0];
  CHECK(testing::error_kind([&] { solve_actions(sc.config); }) == ErrorKind::SingularConfiguration);
}

TEST_CASE("points sharing x on opposite sheets are usable") {
  const HyperellipticCurve curve = random_curve(3, 21);
  const LieAlgebraSpec sp = testing::spec(Series::A, 1);
  const CoefficientLayout layout(sp, 3);
  const HamiltonianVector H = random_hamiltonians(layout, 22);
  const double radius = 1.5 * (1 + curve.max_branch_modulus());
  std::vector<SpectralPoint> pts;
  for (int k = 0; k < 5; ++k) {
    const Complex x = std::polar(radius, 2 * std::numbers::pi * (k + 0.3) / 5);
    const Complex y = principal_y(curve, x);
    pts.push_back({x, y, lambda_roots(layout, H, {x, y})(0)});
  }
  const SpectralPoint& last = pts.back();
  pts.push_back({last.x, -last.y, lambda_roots(layout, H, {last.x, -last.y})(0)});
  const PhaseConfiguration config = make_configuration(curve, sp, pts);
  CHECK(relative_difference(solve_actions(config).values, H.values) < 1e-10);
}

TEST_CASE("configuration validation") {
  const HyperellipticCurve c = testing::quintic_plus_one();
  const LieAlgebraSpec sp = testing::spec(Series::A, 1);
  CHECK(testing::error_kind([&] { make_configuration(c, sp, {{0.0, 1.0, 1.0}}); }) == ErrorKind::InvalidInput);
  CHECK(testing::error_kind([&] {
          make_configuration(c, sp, {{0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {2.0, std::sqrt(33.0), 1.0}});
        }) == ErrorKind::InvalidInput);
}
