#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hitchin {

/// Classical series covered by the toolkit. D_l and the exceptional algebras
/// are rejected at parse time (UnsupportedSeries).
enum class Series { A, B, C };

std::string_view to_string(Series series) noexcept;
Series parse_series(std::string_view text);

/// A simple Lie algebra of type A_l, B_l or C_l.
///
/// Construction validates the rank: l >= 1, and C_1 is redirected to A_1
/// (sp(2) = sl(2)).
class LieAlgebraSpec {
 public:
  static LieAlgebraSpec make(Series series, int rank);

  Series series() const noexcept { return series_; }
  int rank() const noexcept { return rank_; }

  std::string name() const;

  friend bool operator==(const LieAlgebraSpec&, const LieAlgebraSpec&) = default;

 private:
  LieAlgebraSpec(Series series, int rank) : series_(series), rank_(rank) {}

  Series series_;
  int rank_;
};

/// Degrees of the basis invariant polynomials, dim g, and the dimension of the
/// standard (vector) representation.
struct InvariantData {
  std::vector<int> degrees;
  int dim_g = 0;
  int n_standard = 0;
};

InvariantData invariant_data(const LieAlgebraSpec& spec);

/// sum_i (2 d_i - 1) == dim g.
bool check_degree_identity(const LieAlgebraSpec& spec);

}  // namespace hitchin
