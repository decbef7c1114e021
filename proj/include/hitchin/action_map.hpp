#pragma once

#include <cstdint>
#include <vector>

#include "hitchin/spectral_family.hpp"

namespace hitchin {

/// N points (x_i, y_i, lambda_i) on the spectral curve; the phase-space point.
/// The order of `points` carries no meaning.
struct PhaseConfiguration {
  HyperellipticCurve curve;
  CoefficientLayout layout;
  std::vector<SpectralPoint> points;
};

/// Builds a configuration and checks N = dim g (g-1) and y_i^2 = P(x_i).
PhaseConfiguration make_configuration(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                      std::vector<SpectralPoint> points, double tolerance = 1e-9);

void validate(const PhaseConfiguration& config, double tolerance = 1e-9);

/// Row i: m_j(x_i, y_i) lambda_i^{n - d(j)}; rhs_i = -lambda_i^n.
struct LinearSystem {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
};

LinearSystem assemble_system(const PhaseConfiguration& config);

/// 2-norm condition number after scaling every column to unit max-norm.
/// Infinite for a zero column or a zero singular value.
double condition_number(const Eigen::MatrixXcd& matrix);

struct ActionOptions {
  double condition_cap = 1e12;
  double residual_tolerance = 1e-10;
  /// Cramer cross-check runs for N <= cramer_max_size; 0 disables it.
  int cramer_max_size = 8;
  double cramer_tolerance = 1e-8;
};

/// The N Hamiltonians determined by the configuration (pivoted LU).
/// Throws SingularConfiguration when the condition estimate exceeds the cap.
HamiltonianVector solve_actions(const PhaseConfiguration& config, const ActionOptions& options = {});

/// Same map by Cramer's rule, H_j = D_j / D with D_j the determinant with
/// column j replaced by the right-hand side.
HamiltonianVector solve_actions_cramer(const PhaseConfiguration& config);

struct SampleOptions {
  /// x is drawn uniformly (by area) from inner*rho <= |x| <= outer*rho,
  /// rho = max branch-point modulus.
  double annulus_inner = 0.5;
  double annulus_outer = 2.0;
  /// minimal distance to a branch point, in units of (1 + rho)
  double branch_margin = 0.05;
  /// minimal pairwise distance of the x_i, in units of (1 + rho)
  double collocation_margin = 1e-3;
  int max_attempts = 64;
  bool verify_roundtrip = true;
  double roundtrip_tolerance = 1e-10;
  ActionOptions actions{};
};

/// Draws a configuration on the spectral curve of H. Deterministic in `seed`.
PhaseConfiguration sample_config(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                 const HamiltonianVector& H, std::uint64_t seed,
                                 const SampleOptions& options = {});

/// Components uniform in the square [-1, 1] + i[-1, 1].
HamiltonianVector random_hamiltonians(const CoefficientLayout& layout, std::uint64_t seed);

/// Monic curve with a_k uniform in the unit square, redrawn until the roots
/// are well separated.
HyperellipticCurve random_curve(int genus, std::uint64_t seed);

/// max_j |a_j - b_j| / max(max_j |b_j|, floor)
double relative_difference(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double floor = 1e-300);

}  // namespace hitchin
