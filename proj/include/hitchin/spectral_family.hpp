#pragma once

#include <string_view>
#include <vector>

#include "hitchin/base_curve.hpp"
#include "hitchin/lie_data.hpp"

namespace hitchin {

enum class MonomialKind { Even, Odd };

std::string_view to_string(MonomialKind kind) noexcept;

/// One basis function of H^0(d_i D), D = 2(g-1) infinity:
/// Even -> x^k, Odd -> y x^s. `invariant` is 1-based.
struct BasisMonomial {
  int invariant = 1;
  MonomialKind kind = MonomialKind::Even;
  int exponent = 0;

  friend bool operator==(const BasisMonomial&, const BasisMonomial&) = default;
};

/// Ordered monomial basis of all spectral-curve coefficients.
///
/// Order: invariants by ascending degree; inside each invariant the Even
/// block (k = 0..d(g-1)) precedes the Odd block (s = 0..(d-1)(g-1)-2).
/// Per-invariant size is (2d-1)(g-1) and size() == dim g * (g-1).
class CoefficientLayout {
 public:
  CoefficientLayout(const LieAlgebraSpec& spec, int genus);

  const LieAlgebraSpec& spec() const noexcept { return spec_; }
  int genus() const noexcept { return genus_; }
  const InvariantData& invariants() const noexcept { return invariants_; }
  int n_standard() const noexcept { return invariants_.n_standard; }
  int rank() const noexcept { return static_cast<int>(invariants_.degrees.size()); }

  int size() const noexcept { return static_cast<int>(monomials_.size()); }
  const std::vector<BasisMonomial>& monomials() const noexcept { return monomials_; }
  const BasisMonomial& operator[](int j) const { return monomials_[static_cast<std::size_t>(j)]; }

  /// Half-open index range [begin, end) of invariant i (1-based).
  int block_begin(int invariant) const { return offsets_[static_cast<std::size_t>(invariant - 1)]; }
  int block_end(int invariant) const { return offsets_[static_cast<std::size_t>(invariant)]; }

  int degree(int invariant) const { return invariants_.degrees[static_cast<std::size_t>(invariant - 1)]; }
  /// n - d for the invariant of monomial j.
  int lambda_power(int j) const { return n_standard() - degree((*this)[j].invariant); }

 private:
  LieAlgebraSpec spec_;
  int genus_;
  InvariantData invariants_;
  std::vector<BasisMonomial> monomials_;
  std::vector<int> offsets_;
};

CoefficientLayout enumerate_basis(const LieAlgebraSpec& spec, int genus);

/// Coefficients H^{(0)}_{ik}, H^{(1)}_{is} in CoefficientLayout order, sign
/// convention R = lambda^n + sum_i r_i lambda^{n-d_i} ("urav").
struct HamiltonianVector {
  Eigen::VectorXcd values;
};

struct SpectralPoint {
  Complex x;
  Complex y;
  Complex lambda;

  SheetPoint sheet() const noexcept { return {x, y}; }
};

Complex monomial_value(const BasisMonomial& m, const SheetPoint& p);

/// r_i and its partial derivatives in x and y at a base point.
struct InvariantValue {
  Complex r;
  Complex dr_dx;
  Complex dr_dy;
};

InvariantValue invariant_value(const CoefficientLayout& layout, const HamiltonianVector& H, int invariant,
                               const SheetPoint& p);

Complex r_eval(const CoefficientLayout& layout, const HamiltonianVector& H, int invariant, const SheetPoint& p);

/// R(x, y, lambda; H) = lambda^n + sum_i r_i(x, y) lambda^{n - d_i}.
Complex R_eval(const CoefficientLayout& layout, const HamiltonianVector& H, const SpectralPoint& p);

/// sum of absolute values of the terms of R; residual scale.
double R_scale(const CoefficientLayout& layout, const HamiltonianVector& H, const SpectralPoint& p);

Complex dR_dlambda(const CoefficientLayout& layout, const HamiltonianVector& H, const SpectralPoint& p);

/// Total x-derivative of R along the base curve: partial_x R + partial_y R P'(x) / (2y).
/// Throws OnBranchPoint when y = 0.
Complex dR_dx_on_curve(const HyperellipticCurve& curve, const CoefficientLayout& layout,
                       const HamiltonianVector& H, const SpectralPoint& p);

/// Ascending coefficients (degree n) of R(x, y, . ; H) as a polynomial in lambda.
Eigen::VectorXcd lambda_polynomial(const CoefficientLayout& layout, const HamiltonianVector& H,
                                   const SheetPoint& p);

/// The n roots of R(x, y, . ; H), residual-verified.
Eigen::VectorXcd lambda_roots(const CoefficientLayout& layout, const HamiltonianVector& H, const SheetPoint& p);

}  // namespace hitchin
