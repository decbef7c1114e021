#include "hitchin/spectral_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>

#include "hitchin/error.hpp"
#include "hitchin/quadrature.hpp"

namespace hitchin {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// lambda^k divides R on every fiber (k = 1 for B, 0 otherwise); the factor
// carries no branching of the moving roots and is stripped before any
// discriminant work.
int common_lambda_power(const CoefficientLayout& layout) {
  const auto& degrees = layout.invariants().degrees;
  return layout.n_standard() - *std::max_element(degrees.begin(), degrees.end());
}

Eigen::VectorXcd reduced_lambda_polynomial(const CoefficientLayout& layout, const HamiltonianVector& H,
                                           const SheetPoint& p) {
  const Eigen::VectorXcd c = lambda_polynomial(layout, H, p);
  const int k = common_lambda_power(layout);
  return c.tail(c.size() - k);
}


Complex ipow(Complex z, int k) {
  Complex acc(1.0);
  for (int i = 0; i < k; ++i) acc *= z;
  return acc;
}

std::vector<Complex> merge_clusters(const std::vector<Complex>& points, double tolerance) {
  std::vector<Complex> merged;
  std::vector<bool> used(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (used[i]) continue;
    Complex sum = points[i];
    int count = 1;
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (!used[j] && std::abs(points[j] - points[i]) < tolerance) {
        used[j] = true;
        sum += points[j];
        ++count;
      }
    }
    merged.push_back(sum / static_cast<double>(count));
  }
  return merged;
}

// Newton on lambda at fixed (x, y). Stops at the roundoff floor: either the
// update falls below a few ulps or it stops shrinking while already tiny.
bool newton_lambda(const SpectralCurve& sc, SpectralPoint& q) {
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 40; ++it) {
    const Complex d = sc.dR_dlambda(q);
    if (d == Complex(0)) return false;
    const Complex delta = sc.R(q) / d;
    q.lambda -= delta;
    const double size = std::abs(delta);
    const double scale = 1.0 + std::abs(q.lambda);
    if (size <= 4.0 * kEps * scale) return true;
    if (size >= 0.5 * previous && size <= 1e-10 * scale) return true;
    previous = size;
  }
  return false;
}

// A point of the spectral curve over x reached by one short step from p,
// for evaluation inside an already accepted continuation step.
SpectralPoint local_point(const SpectralCurve& sc, const SpectralPoint& p, Complex x) {
  const SheetPoint sheet = y_continuation_step(sc.base(), p.sheet(), x);
  const Complex slope = -sc.dR_dx(p) / sc.dR_dlambda(p);
  SpectralPoint q{x, sheet.y, p.lambda + slope * (x - p.x)};
  if (!newton_lambda(sc, q)) throw Error(ErrorKind::NonConvergence, "Newton corrector for lambda did not converge");
  return q;
}

// Coefficients of R in lambda and their total x-derivatives along the base curve.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> lambda_coefficients_with_dx(const HyperellipticCurve& curve,
                                                                          const CoefficientLayout& layout,
                                                                          const HamiltonianVector& H,
                                                                          const SheetPoint& p) {
  const int n = layout.n_standard();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  Eigen::VectorXcd dc = Eigen::VectorXcd::Zero(n + 1);
  c(n) = 1.0;
  const Complex dy_dx = curve.evaluate_derivatives(p.x).first / (2.0 * p.y);
  for (int i = 1; i <= layout.rank(); ++i) {
    const InvariantValue v = invariant_value(layout, H, i, p);
    c(n - layout.degree(i)) += v.r;
    dc(n - layout.degree(i)) += v.dr_dx + v.dr_dy * dy_dx;
  }
  const int k = common_lambda_power(layout);
  return {c.tail(n + 1 - k), dc.tail(n + 1 - k)};
}

// Polishes an approximate zero of the lambda-discriminant by Newton on
// {R = 0, dR/dlambda = 0} in (x, lambda). Returns nullopt when no sheet has
// a nearly double lambda-root or Newton does not settle.
std::optional<SpectralPoint> refine_projection(const HyperellipticCurve& curve, const CoefficientLayout& layout,
                                         const HamiltonianVector& H, Complex x) {
  const Complex y0 = std::sqrt(curve.evaluate(x));
  if (y0 == Complex(0)) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  SpectralPoint q{};
  for (const Complex y : {y0, -y0}) {
    const Eigen::VectorXcd roots = polynomial_roots(reduced_lambda_polynomial(layout, H, {x, y}));
    for (Eigen::Index a = 0; a < roots.size(); ++a) {
      for (Eigen::Index b = a + 1; b < roots.size(); ++b) {
        const double d = std::abs(roots(a) - roots(b));
        if (d < best) {
          best = d;
          q = {x, y, 0.5 * (roots(a) + roots(b))};
        }
      }
    }
  }
  if (!std::isfinite(best)) return std::nullopt;

  double last_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    const auto [c, dc] = lambda_coefficients_with_dx(curve, layout, H, q.sheet());
    const auto r = horner_derivatives(c, q.lambda);
    const auto rx = horner_derivatives(dc, q.lambda);
    // [R_x R_l; R_lx R_ll] (dx, dl) = (R, R_l)
    const Complex det = rx.value * r.second - r.first * rx.first;
    if (det == Complex(0)) return std::nullopt;
    const Complex dx = (r.value * r.second - r.first * r.first) / det;
    const Complex dl = (rx.value * r.first - rx.first * r.value) / det;
    const Complex x_next = q.x - dx;
    if (!std::isfinite(std::abs(x_next)) || std::abs(dx) > 0.5 * (1.0 + std::abs(q.x))) return std::nullopt;
    const Complex y_next = std::sqrt(curve.evaluate(x_next));
    q = {x_next, std::abs(y_next - q.y) <= std::abs(y_next + q.y) ? y_next : -y_next, q.lambda - dl};
    if (q.y == Complex(0)) return std::nullopt;
    if (std::abs(dx) <= 1e-14 * (1.0 + std::abs(q.x))) return q;
    last_step = std::abs(dx);
  }
  if (last_step <= 1e-9 * (1.0 + std::abs(q.x))) return q;
  return std::nullopt;
}

struct StepOutcome {
  std::optional<SpectralPoint> point;
  ErrorKind failure = ErrorKind::NonConvergence;
};

StepOutcome try_step(const SpectralCurve& sc, const SpectralPoint& from, Complex x_next,
                     const ContinuationOptions& options) {
  SheetPoint sheet;
  try {
    sheet = y_continuation_step(sc.base(), from.sheet(), x_next);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SheetAmbiguity) throw;
    return {std::nullopt, ErrorKind::SheetAmbiguity};
  }

  const Complex dlambda = sc.dR_dlambda(from);
  if (dlambda == Complex(0)) return {std::nullopt, ErrorKind::LambdaCollision};
  const Complex predictor = from.lambda - sc.dR_dx(from) / dlambda * (x_next - from.x);

  SpectralPoint q{x_next, sheet.y, predictor};
  if (!newton_lambda(sc, q)) return {std::nullopt, ErrorKind::NonConvergence};

  const Eigen::VectorXcd roots = sc.lambda_roots(q.sheet());
  double nearest = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    const double d = std::abs(roots(k) - q.lambda);
    if (d < nearest) {
      second = nearest;
      nearest = d;
    } else if (d < second) {
      second = d;
    }
  }
  const double scale = 1.0 + roots.cwiseAbs().maxCoeff();
  if (nearest > 1e-7 * scale) return {std::nullopt, ErrorKind::NonConvergence};
  if (second < options.collision_tolerance * scale || second < 4.0 * std::abs(predictor - q.lambda)) {
    return {std::nullopt, ErrorKind::LambdaCollision};
  }
  return {q, ErrorKind::NonConvergence};
}

bool lambda_less(Complex a, Complex b) {
  const double tie = 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b)));
  if (std::abs(a.real() - b.real()) > tie) return a.real() > b.real();
  return a.imag() > b.imag();
}

Eigen::VectorXcd sorted_roots(Eigen::VectorXcd roots) {
  std::sort(roots.data(), roots.data() + roots.size(), lambda_less);
  return roots;
}

}  // namespace

// ---------------------------------------------------------------------------
// discriminant and branch projections

namespace {

// Sylvester resultant of c and c' for ascending coefficients c.
Complex sylvester_discriminant(const Eigen::VectorXcd& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 2) return Complex(1);
  Eigen::VectorXcd dc(n);
  for (int k = 1; k <= n; ++k) dc(k - 1) = static_cast<double>(k) * c(k);
  const int size = 2 * n - 1;
  Eigen::MatrixXcd sylvester = Eigen::MatrixXcd::Zero(size, size);
  for (int r = 0; r < n - 1; ++r) {
    for (int k = 0; k <= n; ++k) sylvester(r, r + k) = c(n - k);
  }
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < n; ++k) sylvester(n - 1 + r, r + k) = dc(n - 1 - k);
  }
  return sylvester.determinant();
}

// True when the reduced polynomial only has even powers of lambda.
bool is_lambda_even(const CoefficientLayout& layout) {
  const auto& degrees = layout.invariants().degrees;
  const bool even_degrees = std::all_of(degrees.begin(), degrees.end(), [](int d) { return d % 2 == 0; });
  return even_degrees && (layout.n_standard() - common_lambda_power(layout)) % 2 == 0;
}

}  // namespace

Complex lambda_discriminant(const CoefficientLayout& layout, const HamiltonianVector& H, const SheetPoint& p,
                            double lambda_scale) {
  const Eigen::VectorXcd raw = reduced_lambda_polynomial(layout, H, p);
  const int n = static_cast<int>(raw.size()) - 1;
  if (!is_lambda_even(layout)) {
    Eigen::VectorXcd c(n + 1);
    for (int k = 0; k <= n; ++k) c(k) = raw(k) * std::pow(lambda_scale, k - n);
    return sylvester_discriminant(c);
  }
  // Q(lambda) = S(lambda^2): disc Q = const S(0) disc(S)^2, so S(0) disc S
  // has the same zeros without the square
  const int m = n / 2;
  const double nu_scale = lambda_scale * lambda_scale;
  Eigen::VectorXcd s(m + 1);
  for (int k = 0; k <= m; ++k) s(k) = raw(2 * k) * std::pow(nu_scale, k - m);
  return s(0) * sylvester_discriminant(s);
}

namespace {

// Zeros of disc(x, y) disc(x, -y) from its values on the circle |x| = radius.
// Accurate for zeros near the circle; others are only starting guesses.
std::vector<Complex> interpolated_zeros(const HyperellipticCurve& curve, const CoefficientLayout& layout,
                                        const HamiltonianVector& H, double radius) {
  const int n = layout.n_standard();
  const int samples = 2 * (curve.genus() - 1) * n * (n - 1) + 1;

  std::vector<Complex> xs(static_cast<std::size_t>(samples));
  std::vector<Complex> ys(static_cast<std::size_t>(samples));
  double lambda_scale = 1.0;
  for (int k = 0; k < samples; ++k) {
    const Complex x = std::polar(radius, 2.0 * std::numbers::pi * k / samples);
    const Complex y = std::sqrt(curve.evaluate(x));
    xs[static_cast<std::size_t>(k)] = x;
    ys[static_cast<std::size_t>(k)] = y;
    for (const Complex s : {y, -y}) {
      lambda_scale = std::max(lambda_scale, lambda_roots(layout, H, {x, s}).cwiseAbs().maxCoeff());
    }
  }

  Eigen::VectorXcd values(samples);
  for (int k = 0; k < samples; ++k) {
    const auto u = static_cast<std::size_t>(k);
    values(k) = lambda_discriminant(layout, H, {xs[u], ys[u]}, lambda_scale) *
                lambda_discriminant(layout, H, {xs[u], -ys[u]}, lambda_scale);
  }
  const double peak = values.cwiseAbs().maxCoeff();
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw Error(ErrorKind::OnRamification, "lambda-discriminant vanishes identically (non-reduced spectral curve)");
  }

  // coefficients in w = x / radius
  Eigen::VectorXcd coeffs(samples);
  for (int j = 0; j < samples; ++j) {
    Complex acc(0);
    for (int k = 0; k < samples; ++k) {
      acc += values(k) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) * k / samples);
    }
    coeffs(j) = acc / static_cast<double>(samples);
  }
  const double top = coeffs.cwiseAbs().maxCoeff();
  int effective = samples - 1;
  while (effective > 0 && std::abs(coeffs(effective)) < 1e-11 * top) --effective;

  std::vector<Complex> out;
  if (effective == 0) return out;
  const Eigen::VectorXcd w = companion_roots(coeffs.head(effective + 1));
  for (Eigen::Index k = 0; k < w.size(); ++k) out.push_back(radius * w(k));
  return out;
}

}  // namespace

std::vector<Complex> spectral_branch_projections(const HyperellipticCurve& curve, const CoefficientLayout& layout,
                                                 const HamiltonianVector& H) {
  const double unit = 1.0 + curve.max_branch_modulus();
  const double merge = 1e-3 * unit;

  // Interpolated zeros are ill-conditioned away from the sampling circle and
  // at the repeated factors the B and C series produce, so every candidate
  // is polished on the curve. Several radii cover zeros at different scales.
  std::vector<Complex> refined;
  std::vector<Complex> leftovers;
  std::size_t fewest_failures = std::numeric_limits<std::size_t>::max();
  for (const double factor : {1.0, 2.0, 4.0}) {
    std::vector<Complex> failed;
    for (const Complex x : interpolated_zeros(curve, layout, H, factor * unit)) {
      if (curve.distance_to_branch_points(x) < merge) continue;
      if (const auto r = refine_projection(curve, layout, H, x)) {
        refined.push_back(r->x);
      } else {
        failed.push_back(x);
      }
    }
    if (failed.size() < fewest_failures) {
      fewest_failures = failed.size();
      leftovers = std::move(failed);
    }
  }

  std::vector<Complex> out = merge_clusters(refined, merge);
  for (const Complex x : merge_clusters(leftovers, merge)) {
    const bool covered =
        std::any_of(out.begin(), out.end(), [&](Complex r) { return std::abs(r - x) < merge; });
    if (!covered) out.push_back(x);
  }
  return out;
}

SpectralCurve::SpectralCurve(HyperellipticCurve curve, CoefficientLayout layout, HamiltonianVector H)
    : curve_(std::move(curve)), layout_(std::move(layout)), H_(std::move(H)) {
  if (H_.values.size() != layout_.size()) {
    throw Error(ErrorKind::InvalidInput, "Hamiltonian vector length does not match the layout");
  }
  spectral_ = hitchin::spectral_branch_projections(curve_, layout_, H_);
  const double unit = 1.0 + curve_.max_branch_modulus();
  for (Eigen::Index k = 0; k < curve_.branch_points().size(); ++k) obstacles_.push_back(curve_.branch_points()(k));
  for (const Complex s : spectral_) {
    // spectral projections that coincide with a base branch point are absorbed
    bool absorbed = false;
    for (Eigen::Index k = 0; k < curve_.branch_points().size(); ++k) {
      absorbed = absorbed || std::abs(s - curve_.branch_points()(k)) < 1e-3 * unit;
    }
    if (!absorbed) obstacles_.push_back(s);
  }
}

double SpectralCurve::distance_to_obstacles(Complex x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex o : obstacles_) d = std::min(d, std::abs(x - o));
  return d;
}

// ---------------------------------------------------------------------------
// differentials

Eigen::VectorXcd differential_values(const CoefficientLayout& layout, const HamiltonianVector& H,
                                     const SpectralPoint& p) {
  const Complex dlambda = dR_dlambda(layout, H, p);
  double dlambda_scale = layout.n_standard() * std::pow(std::abs(p.lambda), layout.n_standard() - 1);
  for (int i = 1; i <= layout.rank(); ++i) {
    const int power = layout.n_standard() - layout.degree(i);
    if (power > 0) {
      dlambda_scale += power * std::abs(r_eval(layout, H, i, p.sheet())) * std::pow(std::abs(p.lambda), power - 1);
    }
  }
  if (std::abs(dlambda) <= 1e-13 * dlambda_scale || dlambda == Complex(0)) {
    throw Error(ErrorKind::OnRamification, "dR/dlambda vanishes: point is a branch point of the spectral cover");
  }
  if (p.y == Complex(0)) {
    throw Error(ErrorKind::OnRamification, "y vanishes: point lies over a branch point of the base curve");
  }
  const Complex denominator = dlambda * p.y;
  Eigen::VectorXcd out(layout.size());
  for (int j = 0; j < layout.size(); ++j) {
    // m_j / y is x^k / y (Even) or x^s (Odd)
    out(j) = monomial_value(layout[j], p.sheet()) * ipow(p.lambda, layout.lambda_power(j)) / denominator;
  }
  return out;
}

Complex differential_value(const BasisMonomial& index, const HyperellipticCurve&, const CoefficientLayout& layout,
                           const HamiltonianVector& H, const SpectralPoint& p) {
  const auto& monomials = layout.monomials();
  const auto it = std::find(monomials.begin(), monomials.end(), index);
  if (it == monomials.end()) throw Error(ErrorKind::InvalidInput, "differential index is not in the layout");
  return differential_values(layout, H, p)(it - monomials.begin());
}

std::optional<SpectralPoint> locate_spectral_branch_point(const SpectralCurve& sc, Complex x_guess) {
  return refine_projection(sc.base(), sc.layout(), sc.hamiltonians(), x_guess);
}

Eigen::VectorXcd lambda_chart_densities(const SpectralCurve& sc, const SpectralPoint& branch, Complex epsilon) {
  const CoefficientLayout& layout = sc.layout();
  const HamiltonianVector& H = sc.hamiltonians();
  const auto [c, dc] = lambda_coefficients_with_dx(sc.base(), layout, H, branch.sheet());
  const auto r = horner_derivatives(c, branch.lambda);
  const Complex r_x = horner(dc, branch.lambda);
  if (r_x == Complex(0) || r.second == Complex(0)) {
    throw Error(ErrorKind::OnRamification, "branch point is not simple");
  }
  // near a simple branch point x - x_b ~ -R_ll eps^2 / (2 R_x)
  const Complex lambda = branch.lambda + epsilon;
  SpectralPoint q{branch.x - r.second * epsilon * epsilon / (2.0 * r_x), branch.y, lambda};
  q.y = y_continuation_step(sc.base(), branch.sheet(), q.x).y;
  bool converged = false;
  for (int it = 0; it < 60 && !converged; ++it) {
    const Complex step = sc.R(q) / sc.dR_dx(q);
    const Complex x_next = q.x - step;
    q.y = y_continuation_step(sc.base(), q.sheet(), x_next).y;
    q.x = x_next;
    converged = std::abs(step) <= 8.0 * kEps * (1.0 + std::abs(q.x));
  }
  if (!converged) throw Error(ErrorKind::NonConvergence, "no point over lambda_b + epsilon near the branch point");

  // density dx * dx/dlambda with dx/dlambda = -R_lambda / R_x
  const Complex r_x_total = sc.dR_dx(q);
  Eigen::VectorXcd out(layout.size());
  for (int j = 0; j < layout.size(); ++j) {
    out(j) = -monomial_value(layout[j], q.sheet()) * ipow(q.lambda, layout.lambda_power(j)) / (q.y * r_x_total);
  }
  return out;
}

// ---------------------------------------------------------------------------
// continuation and integration

std::vector<SpectralPoint> continue_path(const SpectralCurve& sc, const XPath& path,
                                         const ContinuationOptions& options) {
  if (path.waypoints.empty()) throw Error(ErrorKind::InvalidInput, "path has no waypoints");
  const SpectralPoint& start = path.start;
  if (std::abs(path.waypoints.front() - start.x) > 1e-12 * (1.0 + std::abs(start.x))) {
    throw Error(ErrorKind::InvalidInput, "path start does not lie over the first waypoint");
  }
  if (sheet_residual(sc.base(), start.sheet()) > 1e-9 ||
      std::abs(sc.R(start)) > 1e-8 * R_scale(sc.layout(), sc.hamiltonians(), start)) {
    throw Error(ErrorKind::InvalidInput, "path start is not on the spectral curve");
  }

  std::vector<SpectralPoint> chain{start};
  SpectralPoint current = start;
  current.x = path.waypoints.front();
  for (std::size_t w = 1; w < path.waypoints.size(); ++w) {
    const Complex target = path.waypoints[w];
    if (target == path.waypoints[w - 1]) throw Error(ErrorKind::InvalidInput, "consecutive waypoints coincide");
    const double max_step = std::abs(target - current.x) / std::max(1, options.steps_hint);
    const double min_step = 1e-12 * (1.0 + std::abs(target));
    while (current.x != target) {
      const double remaining = std::abs(target - current.x);
      double step = std::min({remaining, options.step_fraction * sc.distance_to_obstacles(current.x), max_step});
      for (;;) {
        StepOutcome outcome;
        if (step >= min_step) {
          const Complex x_next = step >= remaining ? target : current.x + (target - current.x) * (step / remaining);
          outcome = try_step(sc, current, x_next, options);
        }
        if (outcome.point) {
          current = *outcome.point;
          chain.push_back(current);
          break;
        }
        if (step < min_step) {
          // stalled against an obstacle: name the cover that branches there
          ErrorKind kind = outcome.failure;
          if (sc.distance_to_obstacles(current.x) < 1e-6 * (1.0 + std::abs(current.x))) {
            kind = sc.base().distance_to_branch_points(current.x) <= sc.distance_to_obstacles(current.x)
                       ? ErrorKind::SheetAmbiguity
                       : ErrorKind::LambdaCollision;
          }
          throw Error(kind, "continuation cannot proceed; path runs into a branch point");
        }
        step *= 0.5;
      }
    }
  }
  return chain;
}

PathIntegral integrate_path(const SpectralCurve& sc, const XPath& path, double quad_tol,
                            const ContinuationOptions& options) {
  const std::vector<SpectralPoint> chain = continue_path(sc, path, options);
  PathIntegral out{Eigen::VectorXcd::Zero(sc.layout().size()), chain.back(), 0.0};
  double length = 0.0;
  for (std::size_t k = 1; k < chain.size(); ++k) length += std::abs(chain[k].x - chain[k - 1].x);
  if (length == 0.0) return out;

  for (std::size_t k = 1; k < chain.size(); ++k) {
    const SpectralPoint& p = chain[k - 1];
    const Complex dx = chain[k].x - p.x;
    auto integrand = [&](double t) -> Eigen::VectorXcd {
      return differential_values(sc.layout(), sc.hamiltonians(), local_point(sc, p, p.x + t * dx)) * dx;
    };
    const QuadratureResult piece = integrate_gk15(integrand, 0.0, 1.0, quad_tol * std::abs(dx) / length);
    out.value += piece.value;
    out.error_estimate += piece.error_estimate;
  }
  return out;
}

// ---------------------------------------------------------------------------
// path policy and angle coordinates

double effective_safety_margin(const HyperellipticCurve& curve, const AngleOptions& options) {
  return options.safety_margin > 0.0 ? options.safety_margin : 0.05 * (1.0 + curve.max_branch_modulus());
}

SpectralPoint base_point(const SpectralCurve& sc, const AngleOptions& options) {
  const double x0 = options.base_x.value_or(3.0 * (1.0 + sc.base().max_branch_modulus()));
  if (sc.distance_to_obstacles(x0) < effective_safety_margin(sc.base(), options)) {
    throw Error(ErrorKind::OnRamification, "base point lies within the safety margin of a branch projection");
  }
  const Complex y0 = principal_y(sc.base(), x0);
  const Eigen::VectorXcd roots = sorted_roots(sc.lambda_roots({x0, y0}));
  const double scale = 1.0 + roots.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 1; k < roots.size(); ++k) {
    if (std::abs(roots(k) - roots(0)) < 1e-8 * scale) {
      throw Error(ErrorKind::OnRamification, "base lambda is a multiple root");
    }
  }
  return {x0, y0, roots(0)};
}

bool same_homotopy_class(const PathPlan& a, const PathPlan& b, double tolerance) {
  if (a.loops.size() != b.loops.size() || a.detours.size() != b.detours.size()) return false;
  for (std::size_t k = 0; k < a.loops.size(); ++k) {
    if (std::abs(a.loops[k] - b.loops[k]) > tolerance) return false;
  }
  for (std::size_t k = 0; k < a.detours.size(); ++k) {
    if (a.detours[k].side != b.detours[k].side) return false;
    if (std::abs(a.detours[k].obstacle - b.detours[k].obstacle) > tolerance) return false;
  }
  return true;
}

namespace {

// Builds sheet-correct paths from the base point: a straight leg (with one
// detour waypoint per obstacle inside the margin) preceded by the shortest
// word of lasso loops that moves the base sheet onto the sheet from which the
// leg ends at the target.
class Router {
 public:
  Router(const SpectralCurve& sc, const SpectralPoint& base, const AngleOptions& options)
      : sc_(sc), base_(base), options_(options), margin_(effective_safety_margin(sc.base(), options)) {
    obstacles_ = sc.obstacles();
    const Complex x0 = base.x;
    std::stable_sort(obstacles_.begin(), obstacles_.end(),
                     [x0](Complex a, Complex b) { return std::abs(a - x0) < std::abs(b - x0); });
    ys_[0] = base.y;
    ys_[1] = -base.y;
    for (int s = 0; s < 2; ++s) roots_[s] = sorted_roots(sc.lambda_roots({x0, ys_[s]}));
    base_state_ = identify(base);
  }

  PathPlan plan(const SpectralPoint& target) {
    const Leg leg = straight_leg(base_.x, target.x, std::nullopt);
    int state = base_state_;
    if (leg.waypoints.size() > 1) {
      XPath back{std::vector<Complex>(leg.waypoints.rbegin(), leg.waypoints.rend()), target};
      state = identify(continue_path(sc_, back, options_.continuation).back());
    } else if (std::abs(target.y - base_.y) > 1e-9 * (1.0 + std::abs(base_.y)) ||
               std::abs(target.lambda - base_.lambda) > 1e-9 * (1.0 + std::abs(base_.lambda))) {
      state = identify(target);
    }
    const std::vector<std::size_t> word = shortest_word(state);

    PathPlan plan;
    plan.waypoints.push_back(base_.x);
    for (const std::size_t gen : word) {
      const std::vector<Complex> loop = lasso(gen);
      plan.waypoints.insert(plan.waypoints.end(), loop.begin() + 1, loop.end());
      plan.loops.push_back(obstacles_[gen]);
    }
    plan.waypoints.insert(plan.waypoints.end(), leg.waypoints.begin() + 1, leg.waypoints.end());
    plan.detours = leg.detours;
    return plan;
  }

 private:
  struct Leg {
    std::vector<Complex> waypoints;
    std::vector<Detour> detours;
  };

  Leg straight_leg(Complex from, Complex to, std::optional<std::size_t> exclude) const {
    Leg leg{{from}, {}};
    if (from == to) return leg;
    const Complex direction = to - from;
    const double length = std::abs(direction);
    struct Hit {
      double t;
      Complex waypoint;
      Detour detour;
    };
    std::vector<Hit> hits;
    for (std::size_t k = 0; k < obstacles_.size(); ++k) {
      if (exclude && *exclude == k) continue;
      const Complex o = obstacles_[k];
      const double t = std::real((o - from) * std::conj(direction)) / (length * length);
      if (t <= 0.0 || t >= 1.0) continue;
      const Complex foot = from + t * direction;
      const double distance = std::abs(foot - o);
      const double effective = std::min({margin_, 0.45 * std::abs(from - o), 0.45 * std::abs(to - o)});
      if (distance >= effective) continue;
      Complex normal = distance > 1e-12 * (1.0 + std::abs(o)) ? (foot - o) / distance
                                                              : Complex(0.0, 1.0) * direction / length;
      const Complex waypoint = o + 2.0 * effective * normal;
      const int side = std::imag(std::conj(direction) * (waypoint - o)) > 0.0 ? 1 : -1;
      hits.push_back({t, waypoint, {o, side}});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
    for (const Hit& h : hits) {
      leg.waypoints.push_back(h.waypoint);
      leg.detours.push_back(h.detour);
    }
    leg.waypoints.push_back(to);
    return leg;
  }

  std::vector<Complex> lasso(std::size_t gen) const {
    const Complex o = obstacles_[gen];
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < obstacles_.size(); ++k) {
      if (k != gen) nearest = std::min(nearest, std::abs(obstacles_[k] - o));
    }
    const Complex x0 = base_.x;
    const double radius = std::min({margin_, 0.4 * nearest, 0.4 * std::abs(x0 - o)});
    const Complex u = (x0 - o) / std::abs(x0 - o);
    const Complex entry = o + radius * u;

    const Leg leg = straight_leg(x0, entry, gen);
    std::vector<Complex> out = leg.waypoints;
    const int vertices = std::max(3, options_.circle_vertices);
    const double theta0 = std::arg(u);
    for (int k = 1; k < vertices; ++k) {
      out.push_back(o + std::polar(radius, theta0 + 2.0 * std::numbers::pi * k / vertices));
    }
    out.push_back(entry);
    out.insert(out.end(), leg.waypoints.rbegin() + 1, leg.waypoints.rend());
    return out;
  }

  int identify(const SpectralPoint& p) const {
    const int sheet = std::abs(p.y - ys_[0]) <= std::abs(p.y - ys_[1]) ? 0 : 1;
    const Eigen::VectorXcd& roots = roots_[sheet];
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < roots.size(); ++k) {
      if (std::abs(roots(k) - p.lambda) < std::abs(roots(best) - p.lambda)) best = k;
    }
    if (std::abs(roots(best) - p.lambda) > 1e-6 * (1.0 + std::abs(p.lambda))) {
      throw Error(ErrorKind::NonConvergence, "continued point does not match a sheet over the base abscissa");
    }
    return sheet * static_cast<int>(roots.size()) + static_cast<int>(best);
  }

  SpectralPoint state_point(int state) const {
    const int n = static_cast<int>(roots_[0].size());
    return {base_.x, ys_[state / n], roots_[state / n](state % n)};
  }

  int image(std::size_t gen, int state) {
    const auto key = std::make_pair(gen, state);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    const XPath loop{lasso(gen), state_point(state)};
    const int result = identify(continue_path(sc_, loop, options_.continuation).back());
    memo_.emplace(key, result);
    return result;
  }

  std::vector<std::size_t> shortest_word(int target) {
    if (target == base_state_) return {};
    std::map<int, std::pair<int, std::size_t>> parent;
    std::deque<int> queue{base_state_};
    parent.emplace(base_state_, std::make_pair(-1, std::size_t{0}));
    while (!queue.empty()) {
      const int state = queue.front();
      queue.pop_front();
      for (std::size_t gen = 0; gen < obstacles_.size(); ++gen) {
        const int next = image(gen, state);
        if (parent.count(next)) continue;
        parent.emplace(next, std::make_pair(state, gen));
        if (next == target) {
          std::vector<std::size_t> word;
          for (int s = target; s != base_state_; s = parent.at(s).first) word.push_back(parent.at(s).second);
          std::reverse(word.begin(), word.end());
          return word;
        }
        queue.push_back(next);
      }
    }
    throw Error(ErrorKind::UnreachableSheet, "target sheet is not connected to the base sheet");
  }

  const SpectralCurve& sc_;
  SpectralPoint base_;
  AngleOptions options_;
  double margin_;
  std::vector<Complex> obstacles_;
  std::array<Complex, 2> ys_;
  std::array<Eigen::VectorXcd, 2> roots_;
  int base_state_ = 0;
  std::map<std::pair<std::size_t, int>, int> memo_;
};

}  // namespace

AngleResult angle_coordinates(const PhaseConfiguration& config, const AngleOptions& options) {
  validate(config);
  AngleResult result;
  result.hamiltonians = solve_actions(config);
  const SpectralCurve sc(config.curve, config.layout, result.hamiltonians);
  const SpectralPoint base = base_point(sc, options);
  Router router(sc, base, options);

  result.angles.base_point = base;
  result.angles.values = Eigen::VectorXcd::Zero(config.layout.size());
  for (const SpectralPoint& target : config.points) {
    PathPlan plan = router.plan(target);
    const PathIntegral integral = integrate_path(sc, XPath{plan.waypoints, base}, options.quad_tol, options.continuation);
    const double y_scale = 1.0 + std::abs(target.y);
    const double lambda_scale = 1.0 + std::abs(target.lambda);
    if (std::abs(integral.end.y - target.y) > 1e-8 * y_scale ||
        std::abs(integral.end.lambda - target.lambda) > 1e-7 * lambda_scale) {
      throw Error(ErrorKind::NonConvergence, "planned path did not end on the target sheet");
    }
    result.angles.values += integral.value;
    result.error_estimate += integral.error_estimate;
    result.plans.push_back(std::move(plan));
  }
  return result;
}

AngleVector unnormalized_sl2_angles(const AngleVector& angles, const CoefficientLayout& layout) {
  if (!(layout.spec() == LieAlgebraSpec::make(Series::A, 1))) {
    throw Error(ErrorKind::InvalidInput, "the unnormalized angle form is defined for (A,1) only");
  }
  return {2.0 * angles.values, angles.base_point};
}

}  // namespace hitchin
