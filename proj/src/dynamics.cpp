#include "hitchin/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "hitchin/error.hpp"

namespace hitchin {
namespace {

Eigen::VectorXcd evaluate_wrapped(const ObservableSet& set, const PhaseConfiguration& config) {
  try {
    return set.evaluate(config);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PathInstability) throw;
    throw Error(ErrorKind::StencilFailure, std::string("stencil evaluation failed: ") + e.what());
  }
}

std::string layout_label(const CoefficientLayout& layout, int j) {
  const BasisMonomial& m = layout[j];
  return std::to_string(m.invariant) + "," + std::string(to_string(m.kind)) + "," + std::to_string(m.exponent);
}

}  // namespace

ObservableSet make_set(std::vector<Observable> observables) {
  ObservableSet set;
  for (const Observable& o : observables) set.labels.push_back(o.label);
  set.evaluate = [obs = std::move(observables)](const PhaseConfiguration& config) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(obs.size()));
    for (std::size_t k = 0; k < obs.size(); ++k) out(static_cast<Eigen::Index>(k)) = obs[k].evaluate(config);
    return out;
  };
  return set;
}

Observable coordinate_x(int point) {
  return {"x" + std::to_string(point), [point](const PhaseConfiguration& c) {
            return c.points.at(static_cast<std::size_t>(point)).x;
          }};
}

Observable coordinate_lambda(int point) {
  return {"lambda" + std::to_string(point), [point](const PhaseConfiguration& c) {
            return c.points.at(static_cast<std::size_t>(point)).lambda;
          }};
}

ObservableSet action_observables(const CoefficientLayout& layout, const ActionOptions& options) {
  ObservableSet set;
  for (int j = 0; j < layout.size(); ++j) set.labels.push_back("H[" + layout_label(layout, j) + "]");
  set.evaluate = [options](const PhaseConfiguration& config) { return solve_actions(config, options).values; };
  return set;
}

ObservableSet action_angle_observables(const CoefficientLayout& layout, const AngleOptions& options,
                                       std::vector<PathPlan> reference, double plan_tolerance) {
  ObservableSet set;
  for (int j = 0; j < layout.size(); ++j) set.labels.push_back("H[" + layout_label(layout, j) + "]");
  for (int j = 0; j < layout.size(); ++j) set.labels.push_back("phi[" + layout_label(layout, j) + "]");
  set.evaluate = [options, reference = std::move(reference), plan_tolerance](const PhaseConfiguration& config) {
    const AngleResult result = angle_coordinates(config, options);
    for (std::size_t k = 0; k < reference.size(); ++k) {
      if (!same_homotopy_class(result.plans.at(k), reference[k], plan_tolerance)) {
        throw Error(ErrorKind::PathInstability,
                    "stencil perturbation changed the path plan of point " + std::to_string(k));
      }
    }
    const Eigen::Index n = result.hamiltonians.values.size();
    Eigen::VectorXcd out(2 * n);
    out << result.hamiltonians.values, result.angles.values;
    return out;
  };
  return set;
}

PhaseConfiguration perturb_x(const PhaseConfiguration& config, int point, Complex delta) {
  PhaseConfiguration out = config;
  SpectralPoint& p = out.points.at(static_cast<std::size_t>(point));
  const SheetPoint moved = y_continuation_step(config.curve, p.sheet(), p.x + delta);
  p.x = moved.x;
  p.y = moved.y;
  return out;
}

PhaseConfiguration perturb_lambda(const PhaseConfiguration& config, int point, Complex delta) {
  PhaseConfiguration out = config;
  out.points.at(static_cast<std::size_t>(point)).lambda += delta;
  return out;
}

PhaseGradient phase_gradient(const ObservableSet& set, const PhaseConfiguration& config, double step,
                             int order) {
  if (order != 2 && order != 4) throw Error(ErrorKind::InvalidInput, "stencil order must be 2 or 4");
  const int n_points = static_cast<int>(config.points.size());
  PhaseGradient g;
  g.value = evaluate_wrapped(set, config);
  const Eigen::Index m = g.value.size();
  g.d_x.resize(m, n_points);
  g.d_lambda.resize(m, n_points);
  for (int i = 0; i < n_points; ++i) {
    const SpectralPoint& p = config.points[static_cast<std::size_t>(i)];
    const double hx = step * std::max(1.0, std::abs(p.x));
    const double hl = step * std::max(1.0, std::abs(p.lambda));
    auto shifted = [&](double h) {
      try {
        return perturb_x(config, i, h);
      } catch (const Error& e) {
        throw Error(ErrorKind::StencilFailure, std::string("stencil evaluation failed: ") + e.what());
      }
    };
    auto at_x = [&](double k) { return evaluate_wrapped(set, shifted(k * hx)); };
    auto at_lambda = [&](double k) { return evaluate_wrapped(set, perturb_lambda(config, i, k * hl)); };
    if (order == 2) {
      g.d_x.col(i) = (at_x(1) - at_x(-1)) / (2.0 * hx);
      g.d_lambda.col(i) = (at_lambda(1) - at_lambda(-1)) / (2.0 * hl);
    } else {
      g.d_x.col(i) = (8.0 * (at_x(1) - at_x(-1)) - (at_x(2) - at_x(-2))) / (12.0 * hx);
      g.d_lambda.col(i) = (8.0 * (at_lambda(1) - at_lambda(-1)) - (at_lambda(2) - at_lambda(-2))) / (12.0 * hl);
    }
  }
  return g;
}

Eigen::MatrixXcd bracket_matrix(const PhaseGradient& f, const PhaseGradient& g, const PhaseConfiguration& config) {
  Eigen::VectorXcd y(static_cast<Eigen::Index>(config.points.size()));
  for (std::size_t i = 0; i < config.points.size(); ++i) y(static_cast<Eigen::Index>(i)) = config.points[i].y;
  const auto Y = y.asDiagonal();
  return f.d_lambda * Y * g.d_x.transpose() - f.d_x * Y * g.d_lambda.transpose();
}

Complex poisson_bracket(const Observable& f, const Observable& g, const PhaseConfiguration& config, double step,
                        int order) {
  const PhaseGradient gf = phase_gradient(make_set({f}), config, step, order);
  const PhaseGradient gg = phase_gradient(make_set({g}), config, step, order);
  return bracket_matrix(gf, gg, config)(0, 0);
}

double richardson_estimate(const Observable& f, const Observable& g, const PhaseConfiguration& config,
                           double step, int order) {
  return std::abs(poisson_bracket(f, g, config, step, order) - poisson_bracket(f, g, config, 2.0 * step, order)) /
         (std::pow(2.0, order) - 1.0);
}

std::vector<BracketReport> commutativity_reports(const ObservableSet& set, const PhaseConfiguration& config,
                                                 double step, double tolerance, int order) {
  const PhaseGradient grad = phase_gradient(set, config, step, order);
  const Eigen::MatrixXcd M = bracket_matrix(grad, grad, config);
  std::vector<BracketReport> reports;
  for (int a = 0; a < M.rows(); ++a) {
    for (int b = a + 1; b < M.cols(); ++b) {
      const Complex v = M(a, b);
      reports.push_back({{a, b},
                         {set.labels[static_cast<std::size_t>(a)], set.labels[static_cast<std::size_t>(b)]},
                         v,
                         Complex(0),
                         step,
                         tolerance,
                         std::abs(v) <= tolerance});
    }
  }
  return reports;
}

double commutativity_tolerance(const HamiltonianVector& H, double tol_commute) {
  const double norm = H.values.norm();
  return tol_commute * std::max(1.0, norm * norm);
}

std::vector<BracketReport> verify_commutativity(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                                const HamiltonianVector& H, std::uint64_t seed,
                                                const VerifyOptions& options) {
  const PhaseConfiguration config = sample_config(curve, spec, H, seed, options.sample);
  return commutativity_reports(action_observables(config.layout, options.sample.actions), config, options.fd_step,
                               commutativity_tolerance(H, options.tol_commute), options.stencil_order);
}

DarbouxMatrix darboux_matrix(const PhaseConfiguration& config, const VerifyOptions& options) {
  const AngleResult reference = angle_coordinates(config, options.angles);
  const double plan_tolerance = 1e-3 * (1.0 + config.curve.max_branch_modulus());
  const ObservableSet set = action_angle_observables(config.layout, options.angles, reference.plans, plan_tolerance);
  const Eigen::Index n = config.layout.size();

  double step = options.fd_step;
  for (int attempt = 0;; ++attempt) {
    try {
      const PhaseGradient grad = phase_gradient(set, config, step, options.stencil_order);
      const Eigen::MatrixXcd full = bracket_matrix(grad, grad, config);
      return {full.block(0, n, n, n), step};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PathInstability || attempt >= options.max_step_halvings) throw;
      step *= 0.5;
    }
  }
}

std::vector<BracketReport> verify_darboux(const HyperellipticCurve& curve, const LieAlgebraSpec& spec,
                                          const HamiltonianVector& H, std::uint64_t seed,
                                          const VerifyOptions& options) {
  const PhaseConfiguration config = sample_config(curve, spec, H, seed, options.sample);
  const DarbouxMatrix result = darboux_matrix(config, options);
  const CoefficientLayout& layout = config.layout;
  std::vector<BracketReport> reports;
  for (int a = 0; a < layout.size(); ++a) {
    for (int b = 0; b < layout.size(); ++b) {
      const Complex v = result.matrix(a, b);
      const Complex target = a == b ? Complex(1) : Complex(0);
      reports.push_back({{a, b},
                         {"H[" + layout_label(layout, a) + "]", "phi[" + layout_label(layout, b) + "]"},
                         v,
                         target,
                         result.step,
                         options.tol_darboux,
                         std::abs(v - target) <= options.tol_darboux});
    }
  }
  return reports;
}

bool all_pass(const std::vector<BracketReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const BracketReport& r) { return r.pass; });
}

}  // namespace hitchin
