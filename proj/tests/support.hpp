#pragma once

#include <doctest.h>

#include <cmath>
#include <vector>

#include "hitchin/dynamics.hpp"
#include "hitchin/error.hpp"

namespace testing {

using hitchin::Complex;

inline hitchin::HyperellipticCurve curve_from(int genus, std::vector<Complex> coeffs) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t k = 0; k < coeffs.size(); ++k) c(static_cast<Eigen::Index>(k)) = coeffs[k];
  return hitchin::HyperellipticCurve(genus, c);
}

// y^2 = x^5 + 1
inline hitchin::HyperellipticCurve quintic_plus_one() { return curve_from(2, {1, 0, 0, 0, 0}); }

inline hitchin::HamiltonianVector hvec(std::vector<Complex> values) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) v(static_cast<Eigen::Index>(k)) = values[k];
  return {v};
}

inline hitchin::LieAlgebraSpec spec(hitchin::Series s, int rank) { return hitchin::LieAlgebraSpec::make(s, rank); }

inline bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

template <class F>
hitchin::ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const hitchin::Error& e) {
    return e.kind();
  }
  FAIL("expected an hitchin::Error");
  return hitchin::ErrorKind::InvalidInput;
}

// Random (A-C) data for a given spec and genus, deterministic in seed.
struct Scenario {
  hitchin::HyperellipticCurve curve;
  hitchin::CoefficientLayout layout;
  hitchin::HamiltonianVector H;
  hitchin::PhaseConfiguration config;
};

inline Scenario scenario(hitchin::Series s, int rank, int genus, std::uint64_t seed) {
  const auto sp = spec(s, rank);
  auto curve = hitchin::random_curve(genus, 1000 + seed);
  hitchin::CoefficientLayout layout(sp, genus);
  auto H = hitchin::random_hamiltonians(layout, 2000 + seed);
  auto config = hitchin::sample_config(curve, sp, H, seed);
  return {curve, layout, H, config};
}

}  // namespace testing
