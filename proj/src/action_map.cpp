#include "hitchin/action_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "hitchin/error.hpp"

namespace hitchin {
namespace {

Complex ipow(Complex z, int k) {
  Complex acc(1.0);
  for (int i = 0; i < k; ++i) acc *= z;
  return acc;
}

Eigen::VectorXd column_scales(const Eigen::MatrixXcd& matrix) {
  Eigen::VectorXd scales(matrix.cols());
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) scales(j) = matrix.col(j).cwiseAbs().maxCoeff();
  return scales;
}

using LongComplex = std::complex<long double>;

LongComplex widen(Complex z) { return {z.real(), z.imag()}; }

// rhs - M H with M rebuilt from the points in extended precision.
Eigen::VectorXcd extended_residual(const PhaseConfiguration& config, const Eigen::VectorXcd& H) {
  const CoefficientLayout& layout = config.layout;
  const int n = layout.n_standard();
  Eigen::VectorXcd r(static_cast<Eigen::Index>(config.points.size()));
  for (std::size_t i = 0; i < config.points.size(); ++i) {
    const SpectralPoint& p = config.points[i];
    const LongComplex x = widen(p.x), y = widen(p.y), l = widen(p.lambda);
    std::vector<LongComplex> lambda_powers(static_cast<std::size_t>(n) + 1, 1.0L);
    for (int k = 1; k <= n; ++k) lambda_powers[static_cast<std::size_t>(k)] = lambda_powers[static_cast<std::size_t>(k) - 1] * l;
    LongComplex acc = lambda_powers[static_cast<std::size_t>(n)];
    for (int j = 0; j < layout.size(); ++j) {
      const BasisMonomial& m = layout[j];
      LongComplex term = m.kind == MonomialKind::Odd ? y : LongComplex(1.0L);
      for (int k = 0; k < m.exponent; ++k) term *= x;
      acc += term * lambda_powers[static_cast<std::size_t>(layout.lambda_power(j))] * widen(H(j));
    }
    r(static_cast<Eigen::Index>(i)) = Complex(static_cast<double>(-acc.real()), static_cast<double>(-acc.imag()));
  }
  return r;
}

}  // namespace

double relative_difference(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double floor) {
  const double denom = std::max(b.size() ? b.cwiseAbs().maxCoeff() : 0.0, floor);
  return (a - b).cwiseAbs().maxCoeff() / denom;
}

void validate(const PhaseConfiguration& config, double tolerance) {
  const int expected = config.layout.invariants().dim_g * (config.curve.genus() - 1);
  if (config.layout.genus() != config.curve.genus()) {
    throw Error(ErrorKind::InvalidInput, "layout genus does not match the curve genus");
  }
  if (static_cast<int>(config.points.size()) != expected) {
    throw Error(ErrorKind::InvalidInput, "configuration needs N = " + std::to_string(expected) +
                                             " points, got " + std::to_string(config.points.size()));
  }
  for (std::size_t i = 0; i < config.points.size(); ++i) {
    const SpectralPoint& p = config.points[i];
    if (!std::isfinite(std::abs(p.x)) || !std::isfinite(std::abs(p.y)) || !std::isfinite(std::abs(p.lambda))) {
      throw Error(ErrorKind::InvalidInput, "point " + std::to_string(i) + " is not finite");
    }
    if (sheet_residual(config.curve, p.sheet()) > tolerance) {
      throw Error(ErrorKind::InvalidInput, "point " + std::to_string(i) + " does not satisfy y^2 = P(x)");
    }
  }
}

PhaseConfiguration make_configuration(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                      std::vector<SpectralPoint> points, double tolerance) {
  PhaseConfiguration config{curve, CoefficientLayout(spec, curve.genus()), std::move(points)};
  validate(config, tolerance);
  return config;
}

LinearSystem assemble_system(const PhaseConfiguration& config) {
  const CoefficientLayout& layout = config.layout;
  const int N = static_cast<int>(config.points.size());
  const int n = layout.n_standard();
  LinearSystem system{Eigen::MatrixXcd(N, layout.size()), Eigen::VectorXcd(N)};
  for (int i = 0; i < N; ++i) {
    const SpectralPoint& p = config.points[static_cast<std::size_t>(i)];
    for (int j = 0; j < layout.size(); ++j) {
      system.matrix(i, j) = monomial_value(layout[j], p.sheet()) * ipow(p.lambda, layout.lambda_power(j));
    }
    system.rhs(i) = -ipow(p.lambda, n);
  }
  return system;
}

double condition_number(const Eigen::MatrixXcd& matrix) {
  const Eigen::VectorXd scales = column_scales(matrix);
  if (scales.size() == 0 || scales.minCoeff() == 0.0) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXcd scaled = matrix * scales.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaled);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

HamiltonianVector solve_actions_cramer(const PhaseConfiguration& config) {
  const LinearSystem system = assemble_system(config);
  const Complex det = system.matrix.determinant();
  if (det == Complex(0)) throw Error(ErrorKind::SingularConfiguration, "Cramer determinant D vanishes");
  HamiltonianVector H{Eigen::VectorXcd(system.matrix.cols())};
  for (Eigen::Index j = 0; j < system.matrix.cols(); ++j) {
    Eigen::MatrixXcd replaced = system.matrix;
    replaced.col(j) = system.rhs;
    H.values(j) = replaced.determinant() / det;
  }
  return H;
}

HamiltonianVector solve_actions(const PhaseConfiguration& config, const ActionOptions& options) {
  const LinearSystem system = assemble_system(config);
  if (system.matrix.rows() != system.matrix.cols()) {
    throw Error(ErrorKind::InvalidInput, "configuration size does not match the layout");
  }
  const double cond = condition_number(system.matrix);
  if (!(cond <= options.condition_cap)) {
    throw Error(ErrorKind::SingularConfiguration,
                "condition estimate " + std::to_string(cond) + " exceeds cap " + std::to_string(options.condition_cap));
  }

  const Eigen::VectorXd scales = column_scales(system.matrix);
  const Eigen::MatrixXcd scaled = system.matrix * scales.cwiseInverse().asDiagonal();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu = scaled.partialPivLu();
  HamiltonianVector H{lu.solve(system.rhs).cwiseQuotient(scales.cast<Complex>())};
  // One step of refinement against an extended-precision residual: H then
  // depends smoothly on the points down to double rounding, which the
  // finite-difference brackets need.
  H.values += lu.solve(extended_residual(config, H.values)).cwiseQuotient(scales.cast<Complex>());

  const double residual = (system.matrix * H.values - system.rhs).cwiseAbs().maxCoeff();
  const double scale = system.matrix.cwiseAbs().rowwise().sum().maxCoeff() * H.values.cwiseAbs().maxCoeff() +
                       system.rhs.cwiseAbs().maxCoeff();
  if (residual > options.residual_tolerance * scale) {
    throw Error(ErrorKind::NonConvergence, "LU solution residual " + std::to_string(residual) +
                                               " above tolerance");
  }

  if (system.matrix.rows() <= options.cramer_max_size) {
    const HamiltonianVector cramer = solve_actions_cramer(config);
    const double floor = 1e-14 * system.rhs.cwiseAbs().maxCoeff() /
                         std::max(system.matrix.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if (relative_difference(cramer.values, H.values, std::max(floor, 1e-300)) > options.cramer_tolerance) {
      throw Error(ErrorKind::NonConvergence, "Cramer cross-check disagrees with the LU solution");
    }
  }
  return H;
}

PhaseConfiguration sample_config(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                 const HamiltonianVector& H, std::uint64_t seed, const SampleOptions& options) {
  const CoefficientLayout layout(spec, curve.genus());
  if (H.values.size() != layout.size()) {
    throw Error(ErrorKind::InvalidInput, "Hamiltonian vector length does not match the layout");
  }
  const int N = layout.size();
  const double rho = curve.max_branch_modulus();
  const double unit = 1.0 + rho;
  const double branch_margin = std::max(curve.separation_tolerance(), options.branch_margin * unit);
  const double r_in = options.annulus_inner * rho;
  const double r_out = options.annulus_outer * rho;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::vector<SpectralPoint> points;
    points.reserve(static_cast<std::size_t>(N));
    int draws = 0;
    while (static_cast<int>(points.size()) < N) {
      if (++draws > 10000 * N) {
        throw Error(ErrorKind::NonConvergence, "could not place sample points in the annulus");
      }
      const double radius = std::sqrt(r_in * r_in + uniform(rng) * (r_out * r_out - r_in * r_in));
      const double angle = 2.0 * std::numbers::pi * uniform(rng);
      const Complex x = std::polar(radius, angle);
      const bool flip = uniform(rng) < 0.5;
      const double pick = uniform(rng);
      if (curve.distance_to_branch_points(x) < branch_margin) continue;
      bool crowded = false;
      for (const auto& q : points) crowded = crowded || std::abs(q.x - x) < options.collocation_margin * unit;
      if (crowded) continue;

      Complex y = principal_y(curve, x);
      if (flip) y = -y;
      const SheetPoint base{x, y};
      const Eigen::VectorXcd roots = lambda_roots(layout, H, base);

      // prefer nonzero simple roots; fall back to any root (e.g. H = 0)
      const double lambda_scale = 1.0 + roots.cwiseAbs().maxCoeff();
      std::vector<Complex> candidates;
      for (Eigen::Index k = 0; k < roots.size(); ++k) {
        double separation = std::numeric_limits<double>::infinity();
        for (Eigen::Index m = 0; m < roots.size(); ++m) {
          if (m != k) separation = std::min(separation, std::abs(roots(k) - roots(m)));
        }
        if (std::abs(roots(k)) > 1e-6 * lambda_scale && separation > 1e-6 * lambda_scale) {
          candidates.push_back(roots(k));
        }
      }
      if (candidates.empty()) candidates.assign(roots.data(), roots.data() + roots.size());
      const auto index = std::min(candidates.size() - 1, static_cast<std::size_t>(pick * candidates.size()));
      points.push_back({x, y, candidates[index]});
    }

    PhaseConfiguration config{curve, layout, std::move(points)};
    if (!options.verify_roundtrip) return config;
    try {
      const HamiltonianVector recovered = solve_actions(config, options.actions);
      const double err = relative_difference(recovered.values, H.values);
      if (err < options.roundtrip_tolerance) return config;
      last_failure = "round-trip error " + std::to_string(err);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularConfiguration && e.kind() != ErrorKind::NonConvergence) throw;
      last_failure = e.what();
    }
  }
  throw Error(ErrorKind::SingularConfiguration,
              "no well-conditioned configuration after " + std::to_string(options.max_attempts) +
                  " attempts (" + last_failure + ")");
}

HamiltonianVector random_hamiltonians(const CoefficientLayout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  HamiltonianVector H{Eigen::VectorXcd(layout.size())};
  for (int j = 0; j < layout.size(); ++j) {
    const double re = uniform(rng);
    const double im = uniform(rng);
    H.values(j) = Complex(re, im);
  }
  return H;
}

HyperellipticCurve random_curve(int genus, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXcd coeffs(2 * genus + 1);
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      const double re = uniform(rng);
      const double im = uniform(rng);
      coeffs(k) = Complex(re, im);
    }
    HyperellipticCurve curve(genus, coeffs);
    const auto& roots = curve.branch_points();
    double separation = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
      for (Eigen::Index j = i + 1; j < roots.size(); ++j) separation = std::min(separation, std::abs(roots(i) - roots(j)));
    }
    if (separation > 0.1) return curve;
  }
  throw Error(ErrorKind::NonConvergence, "random_curve: no well-separated curve drawn");
}

}  // namespace hitchin
