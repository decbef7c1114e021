#pragma once

#include <optional>
#include <vector>

#include "hitchin/action_map.hpp"

namespace hitchin {

/// The spectral curve R(x, y, lambda; H) = 0 over a base curve, together
/// with the finite x-projections of the branch points of both covers.
///
/// Immutable after construction; the projections are computed eagerly.
class SpectralCurve {
 public:
  SpectralCurve(HyperellipticCurve curve, CoefficientLayout layout, HamiltonianVector H);

  const HyperellipticCurve& base() const noexcept { return curve_; }
  const CoefficientLayout& layout() const noexcept { return layout_; }
  const HamiltonianVector& hamiltonians() const noexcept { return H_; }

  /// x-values over which two lambda-roots meet on at least one y-sheet.
  const std::vector<Complex>& spectral_branch_projections() const noexcept { return spectral_; }
  /// Base branch points followed by the spectral projections.
  const std::vector<Complex>& obstacles() const noexcept { return obstacles_; }
  double distance_to_obstacles(Complex x) const;

  Complex R(const SpectralPoint& p) const { return R_eval(layout_, H_, p); }
  Complex dR_dlambda(const SpectralPoint& p) const { return hitchin::dR_dlambda(layout_, H_, p); }
  Complex dR_dx(const SpectralPoint& p) const { return dR_dx_on_curve(curve_, layout_, H_, p); }
  Eigen::VectorXcd lambda_roots(const SheetPoint& p) const { return hitchin::lambda_roots(layout_, H_, p); }

 private:
  HyperellipticCurve curve_;
  CoefficientLayout layout_;
  HamiltonianVector H_;
  std::vector<Complex> spectral_;
  std::vector<Complex> obstacles_;
};

/// A polynomial in the coefficients of R(x, y, . ; H) that vanishes exactly
/// when two lambda-roots not fixed at 0 collide. The power of lambda common
/// to every fiber is removed first; when the rest is S(lambda^2) the value is
/// S(0) disc(S), otherwise the Sylvester discriminant. Lambda is rescaled by
/// `lambda_scale`.
Complex lambda_discriminant(const CoefficientLayout& layout, const HamiltonianVector& H, const SheetPoint& p,
                            double lambda_scale = 1.0);

/// Zeros of disc(x, y) disc(x, -y) (disc as above), a polynomial in x of degree at most
/// 2(g-1) n (n-1), recovered by interpolation on a circle. Clusters closer
/// than 1e-3 (1 + rho) are merged. Throws OnRamification when the
/// discriminant vanishes identically (non-reduced spectral curve).
std::vector<Complex> spectral_branch_projections(const HyperellipticCurve& curve, const CoefficientLayout& layout,
                                                 const HamiltonianVector& H);

/// Density against dx of the holomorphic differential attached to basis
/// monomial `index`: m(x, y) lambda^{n-d} / (dR/dlambda * y). Throws
/// OnRamification when |dR/dlambda| or |y| is below tolerance.
Complex differential_value(const BasisMonomial& index, const HyperellipticCurve& curve,
                           const CoefficientLayout& layout, const HamiltonianVector& H, const SpectralPoint& p);

/// All N densities at once, in layout order.
Eigen::VectorXcd differential_values(const CoefficientLayout& layout, const HamiltonianVector& H,
                                     const SpectralPoint& p);

/// Newton on {R = 0, dR/dlambda = 0} from a rough x; nullopt when it does
/// not settle.
std::optional<SpectralPoint> locate_spectral_branch_point(const SpectralCurve& spectral, Complex x_guess);

/// All densities pulled back to the local coordinate lambda at the point over
/// lambda_b + epsilon near a simple branch point: -m lambda^{n-d} / (y dR/dx).
Eigen::VectorXcd lambda_chart_densities(const SpectralCurve& spectral, const SpectralPoint& branch,
                                        Complex epsilon);

/// Polyline in the x-plane; `start` fixes the sheets of y and lambda at
/// waypoints[0].
struct XPath {
  std::vector<Complex> waypoints;
  SpectralPoint start;
};

struct ContinuationOptions {
  /// step <= step_fraction * distance to the nearest obstacle
  double step_fraction = 0.25;
  /// minimal number of steps per polyline segment
  int steps_hint = 1;
  /// two lambda-roots closer than this (relative to 1 + |lambda|) collide
  double collision_tolerance = 1e-8;
};

/// Analytic continuation of (y, lambda) along the path. Every waypoint
/// appears in the returned chain.
std::vector<SpectralPoint> continue_path(const SpectralCurve& spectral, const XPath& path,
                                         const ContinuationOptions& options = {});

struct PathIntegral {
  Eigen::VectorXcd value;
  SpectralPoint end;
  double error_estimate = 0.0;
};

/// Integrals of all N differentials along the continued path.
PathIntegral integrate_path(const SpectralCurve& spectral, const XPath& path, double quad_tol,
                            const ContinuationOptions& options = {});

struct AngleOptions {
  double quad_tol = 1e-9;
  /// absolute; <= 0 selects 0.05 (1 + rho)
  double safety_margin = 0.0;
  /// real base abscissa; default 3 (1 + rho)
  std::optional<double> base_x;
  int circle_vertices = 16;
  ContinuationOptions continuation{};
};

double effective_safety_margin(const HyperellipticCurve& curve, const AngleOptions& options);

/// Deterministic base point: x0 on the real axis, y on the principal sheet,
/// lambda the root with largest real part (ties: largest imaginary part).
SpectralPoint base_point(const SpectralCurve& spectral, const AngleOptions& options = {});

struct Detour {
  Complex obstacle;
  int side = 1;
};

/// How the path from the base point to one configuration point is built:
/// the lasso loops (by obstacle position, in order) followed by the straight
/// leg with its detours.
struct PathPlan {
  std::vector<Complex> loops;
  std::vector<Detour> detours;
  std::vector<Complex> waypoints;
};

bool same_homotopy_class(const PathPlan& a, const PathPlan& b, double tolerance);

struct AngleVector {
  Eigen::VectorXcd values;
  SpectralPoint base_point;
};

struct AngleResult {
  AngleVector angles;
  HamiltonianVector hamiltonians;
  std::vector<PathPlan> plans;
  double error_estimate = 0.0;
};

/// phi_j = sum_i int_{base}^{gamma_i} density_j dx along policy-built paths.
AngleResult angle_coordinates(const PhaseConfiguration& config, const AngleOptions& options = {});

/// Converts (A,1) angles to the unnormalized form sum int x^k dx / (lambda y),
/// i.e. multiplies by dR/dlambda / lambda = 2.
AngleVector unnormalized_sl2_angles(const AngleVector& angles, const CoefficientLayout& layout);

}  // namespace hitchin
