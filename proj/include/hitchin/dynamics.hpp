#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hitchin/spectral_geometry.hpp"

namespace hitchin {

/// A function on phase space, evaluated at a configuration.
struct Observable {
  std::string label;
  std::function<Complex(const PhaseConfiguration&)> evaluate;
};

/// Several observables that share one evaluation (e.g. all Hamiltonians
/// from one linear solve).
struct ObservableSet {
  std::vector<std::string> labels;
  std::function<Eigen::VectorXcd(const PhaseConfiguration&)> evaluate;
};

ObservableSet make_set(std::vector<Observable> observables);
Observable coordinate_x(int point);
Observable coordinate_lambda(int point);

/// H_j for every layout index j, labelled "H[j]".
ObservableSet action_observables(const CoefficientLayout& layout, const ActionOptions& options = {});

/// [H; phi] of length 2N. Each evaluation checks that the path plans match
/// `reference` (else PathInstability).
ObservableSet action_angle_observables(const CoefficientLayout& layout, const AngleOptions& options,
                                       std::vector<PathPlan> reference, double plan_tolerance);

/// x_i -> x_i + delta with y_i re-rooted on its sheet; lambda_i unchanged.
PhaseConfiguration perturb_x(const PhaseConfiguration& config, int point, Complex delta);
PhaseConfiguration perturb_lambda(const PhaseConfiguration& config, int point, Complex delta);

/// Central-difference partials of every member of a set. Column i holds the
/// derivative in x_i (resp. lambda_i). The step for a coordinate c is
/// step * max(1, |c|); `order` is 2 (three-point) or 4 (five-point).
struct PhaseGradient {
  Eigen::VectorXcd value;
  Eigen::MatrixXcd d_x;
  Eigen::MatrixXcd d_lambda;
};

PhaseGradient phase_gradient(const ObservableSet& set, const PhaseConfiguration& config, double step,
                             int order = 2);

/// M(a, b) = {f_a, g_b} = sum_i y_i (df_a/dlambda_i dg_b/dx_i - df_a/dx_i dg_b/dlambda_i).
Eigen::MatrixXcd bracket_matrix(const PhaseGradient& f, const PhaseGradient& g, const PhaseConfiguration& config);

Complex poisson_bracket(const Observable& f, const Observable& g, const PhaseConfiguration& config,
                        double step = 1e-5, int order = 2);

/// |B(h) - B(2h)| / (2^order - 1): leading discretization error at step h.
double richardson_estimate(const Observable& f, const Observable& g, const PhaseConfiguration& config,
                           double step = 1e-5, int order = 2);

struct BracketReport {
  std::array<int, 2> pair{};
  std::array<std::string, 2> labels;
  Complex value;
  Complex target;
  double step = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  double fd_step = 1e-5;
  /// relative to max(1, |H|^2)
  double tol_commute = 1e-6;
  double tol_darboux = 1e-3;
  /// Bracket entries are sums of terms much larger than the result, so the
  /// five-point stencil is the default.
  int stencil_order = 4;
  /// step halvings allowed when a stencil point changes the path plan
  int max_step_halvings = 3;
  AngleOptions angles{};
  SampleOptions sample{};
};

/// Reports {f_a, f_b} for all a < b against target 0.
std::vector<BracketReport> commutativity_reports(const ObservableSet& set, const PhaseConfiguration& config,
                                                 double step, double tolerance, int order = 2);

double commutativity_tolerance(const HamiltonianVector& H, double tol_commute);

std::vector<BracketReport> verify_commutativity(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                                const HamiltonianVector& H, std::uint64_t seed,
                                                const VerifyOptions& options = {});

struct DarbouxMatrix {
  /// {H_a, phi_b}
  Eigen::MatrixXcd matrix;
  double step = 0.0;
};

/// {H_a, phi_b} at a given configuration, shrinking the step on PathInstability.
DarbouxMatrix darboux_matrix(const PhaseConfiguration& config, const VerifyOptions& options = {});

/// N x N reports in row-major order against target delta_ab.
std::vector<BracketReport> verify_darboux(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                          const HamiltonianVector& H, std::uint64_t seed,
                                          const VerifyOptions& options = {});

bool all_pass(const std::vector<BracketReport>& reports);

}  // namespace hitchin
