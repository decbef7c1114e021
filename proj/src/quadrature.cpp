#include "hitchin/quadrature.hpp"

#include <array>
#include <limits>
#include <queue>
#include <vector>

#include "hitchin/error.hpp"

namespace hitchin {
namespace {

// Kronrod abscissae on [0, 1); odd indices are the Gauss-7 nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  Eigen::VectorXcd kronrod;
  double error;
};

Panel gk15(const std::function<Eigen::VectorXcd(double)>& f, double a, double b, int& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Eigen::VectorXcd mid = f(center);
  Eigen::VectorXcd kronrod = kKronrod[7] * mid;
  Eigen::VectorXcd gauss = kGauss[3] * mid;
  evaluations += 1;
  for (int k = 0; k < 7; ++k) {
    const Eigen::VectorXcd sum = f(center - half * kNodes[k]) + f(center + half * kNodes[k]);
    evaluations += 2;
    kronrod += kKronrod[k] * sum;
    if (k % 2 == 1) gauss += kGauss[k / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, (kronrod - gauss).cwiseAbs().maxCoeff()};
}

constexpr int kMaxEvaluations = 4'000'000;

struct Node {
  double a;
  double b;
  int depth;
  Panel panel;
  bool operator<(const Node& other) const { return panel.error < other.panel.error; }
};

}  // namespace

QuadratureResult integrate_gk15(const std::function<Eigen::VectorXcd(double)>& f, double a, double b,
                                double abs_tol, int max_depth) {
  QuadratureResult out;
  // Global adaptation: always bisect the panel with the largest error
  // estimate. Panels whose estimate is at roundoff level are final.
  std::priority_queue<Node> open;
  std::vector<Node> done;
  double total_error = 0.0;
  auto push = [&](double lo, double hi, int depth) {
    Node node{lo, hi, depth, gk15(f, lo, hi, out.evaluations)};
    total_error += node.panel.error;
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * node.panel.kronrod.cwiseAbs().maxCoeff();
    if (node.panel.error <= roundoff) {
      done.push_back(std::move(node));
    } else {
      open.push(std::move(node));
    }
  };
  push(a, b, 0);
  const Eigen::Index width = done.empty() ? open.top().panel.kronrod.size() : done.front().panel.kronrod.size();
  while (total_error > abs_tol && !open.empty()) {
    const Node worst = open.top();
    open.pop();
    if (worst.depth >= max_depth || out.evaluations > kMaxEvaluations) {
      throw Error(ErrorKind::QuadratureFailure, "error target not met after maximal bisection depth");
    }
    total_error -= worst.panel.error;
    const double mid = 0.5 * (worst.a + worst.b);
    push(worst.a, mid, worst.depth + 1);
    push(mid, worst.b, worst.depth + 1);
  }
  out.value = Eigen::VectorXcd::Zero(width);
  for (const Node& n : done) out.value += n.panel.kronrod;
  for (; !open.empty(); open.pop()) out.value += open.top().panel.kronrod;
  out.error_estimate = total_error;
  return out;
}

}  // namespace hitchin
