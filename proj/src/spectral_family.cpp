#include "hitchin/spectral_family.hpp"

#include <cmath>

#include "hitchin/error.hpp"

namespace hitchin {
namespace {

Complex ipow(Complex z, int k) {
  Complex acc(1.0);
  for (int i = 0; i < k; ++i) acc *= z;
  return acc;
}

void check_size(const CoefficientLayout& layout, const HamiltonianVector& H) {
  if (H.values.size() != layout.size()) {
    throw Error(ErrorKind::InvalidInput, "Hamiltonian vector has length " + std::to_string(H.values.size()) +
                                             ", layout expects " + std::to_string(layout.size()));
  }
}

}  // namespace

std::string_view to_string(MonomialKind kind) noexcept {
  return kind == MonomialKind::Even ? "even" : "odd";
}

CoefficientLayout::CoefficientLayout(const LieAlgebraSpec& spec, int genus)
    : spec_(spec), genus_(genus), invariants_(invariant_data(spec)) {
  if (genus < 2) {
    throw Error(ErrorKind::InvalidInput, "genus must be >= 2, got " + std::to_string(genus));
  }
  offsets_.push_back(0);
  for (std::size_t i = 0; i < invariants_.degrees.size(); ++i) {
    const int d = invariants_.degrees[i];
    const int invariant = static_cast<int>(i) + 1;
    for (int k = 0; k <= d * (genus - 1); ++k) monomials_.push_back({invariant, MonomialKind::Even, k});
    for (int s = 0; s <= (d - 1) * (genus - 1) - 2; ++s) monomials_.push_back({invariant, MonomialKind::Odd, s});
    offsets_.push_back(static_cast<int>(monomials_.size()));
  }
}

CoefficientLayout enumerate_basis(const LieAlgebraSpec& spec, int genus) { return CoefficientLayout(spec, genus); }

Complex monomial_value(const BasisMonomial& m, const SheetPoint& p) {
  const Complex xs = ipow(p.x, m.exponent);
  return m.kind == MonomialKind::Even ? xs : p.y * xs;
}

InvariantValue invariant_value(const CoefficientLayout& layout, const HamiltonianVector& H, int invariant,
                               const SheetPoint& p) {
  check_size(layout, H);
  // r = E(x) + y O(x), Horner over each block (exponents are consecutive from 0)
  Complex even(0), even_dx(0), odd(0), odd_dx(0);
  for (int j = layout.block_end(invariant); j-- > layout.block_begin(invariant);) {
    const Complex h = H.values(j);
    if (layout[j].kind == MonomialKind::Even) {
      even_dx = even_dx * p.x + even;
      even = even * p.x + h;
    } else {
      odd_dx = odd_dx * p.x + odd;
      odd = odd * p.x + h;
    }
  }
  return {even + p.y * odd, even_dx + p.y * odd_dx, odd};
}

Complex r_eval(const CoefficientLayout& layout, const HamiltonianVector& H, int invariant, const SheetPoint& p) {
  return invariant_value(layout, H, invariant, p).r;
}

Complex R_eval(const CoefficientLayout& layout, const HamiltonianVector& H, const SpectralPoint& p) {
  const int n = layout.n_standard();
  Complex value = ipow(p.lambda, n);
  for (int i = 1; i <= layout.rank(); ++i) {
    value += r_eval(layout, H, i, p.sheet()) * ipow(p.lambda, n - layout.degree(i));
  }
  return value;
}

double R_scale(const CoefficientLayout& layout, const HamiltonianVector& H, const SpectralPoint& p) {
  check_size(layout, H);
  const int n = layout.n_standard();
  const double abs_lambda = std::abs(p.lambda);
  double scale = std::pow(abs_lambda, n);
  for (int j = 0; j < layout.size(); ++j) {
    scale += std::abs(H.values(j)) * std::abs(monomial_value(layout[j], p.sheet())) *
             std::pow(abs_lambda, layout.lambda_power(j));
  }
  return scale;
}

Complex dR_dlambda(const CoefficientLayout& layout, const HamiltonianVector& H, const SpectralPoint& p) {
  const int n = layout.n_standard();
  Complex value = static_cast<double>(n) * ipow(p.lambda, n - 1);
  for (int i = 1; i <= layout.rank(); ++i) {
    const int power = n - layout.degree(i);
    if (power == 0) continue;
    value += static_cast<double>(power) * r_eval(layout, H, i, p.sheet()) * ipow(p.lambda, power - 1);
  }
  return value;
}

Complex dR_dx_on_curve(const HyperellipticCurve& curve, const CoefficientLayout& layout,
                       const HamiltonianVector& H, const SpectralPoint& p) {
  if (p.y == Complex(0)) {
    throw Error(ErrorKind::OnBranchPoint, "dR/dx along the base curve is undefined at y = 0");
  }
  const int n = layout.n_standard();
  const Complex dy_dx = curve.evaluate_derivatives(p.x).first / (2.0 * p.y);
  Complex value(0);
  for (int i = 1; i <= layout.rank(); ++i) {
    const InvariantValue v = invariant_value(layout, H, i, p.sheet());
    value += (v.dr_dx + v.dr_dy * dy_dx) * ipow(p.lambda, n - layout.degree(i));
  }
  return value;
}

Eigen::VectorXcd lambda_polynomial(const CoefficientLayout& layout, const HamiltonianVector& H,
                                   const SheetPoint& p) {
  const int n = layout.n_standard();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  c(n) = 1.0;
  for (int i = 1; i <= layout.rank(); ++i) c(n - layout.degree(i)) += r_eval(layout, H, i, p);
  return c;
}

Eigen::VectorXcd lambda_roots(const CoefficientLayout& layout, const HamiltonianVector& H, const SheetPoint& p) {
  return polynomial_roots(lambda_polynomial(layout, H, p));
}

}  // namespace hitchin
