#include "hitchin/lie_data.hpp"

#include <numeric>

#include "hitchin/error.hpp"

namespace hitchin {

std::string_view to_string(Series series) noexcept {
  switch (series) {
    case Series::A: return "A";
    case Series::B: return "B";
    case Series::C: return "C";
  }
  return "?";
}

Series parse_series(std::string_view text) {
  if (text == "A" || text == "a") return Series::A;
  if (text == "B" || text == "b") return Series::B;
  if (text == "C" || text == "c") return Series::C;
  if (text == "D" || text == "d" || text == "E" || text == "e" || text == "F" || text == "f" ||
      text == "G" || text == "g" || text == "G2") {
    throw Error(ErrorKind::UnsupportedSeries,
                "series " + std::string(text) + " is not supported (only A, B, C)");
  }
  throw Error(ErrorKind::InvalidInput, "unknown series '" + std::string(text) + "'");
}

LieAlgebraSpec LieAlgebraSpec::make(Series series, int rank) {
  if (rank < 1) {
    throw Error(ErrorKind::InvalidRank, "rank must be >= 1, got " + std::to_string(rank));
  }
  if (series == Series::C && rank == 1) return LieAlgebraSpec(Series::A, 1);
  return LieAlgebraSpec(series, rank);
}

std::string LieAlgebraSpec::name() const {
  return std::string(to_string(series_)) + std::to_string(rank_);
}

InvariantData invariant_data(const LieAlgebraSpec& spec) {
  const int l = spec.rank();
  InvariantData data;
  data.degrees.reserve(l);
  switch (spec.series()) {
    case Series::A:
      for (int i = 0; i < l; ++i) data.degrees.push_back(i + 2);
      data.dim_g = l * (l + 2);
      data.n_standard = l + 1;
      break;
    case Series::B:
      for (int i = 1; i <= l; ++i) data.degrees.push_back(2 * i);
      data.dim_g = l * (2 * l + 1);
      data.n_standard = 2 * l + 1;
      break;
    case Series::C:
      for (int i = 1; i <= l; ++i) data.degrees.push_back(2 * i);
      data.dim_g = l * (2 * l + 1);
      data.n_standard = 2 * l;
      break;
  }
  return data;
}

bool check_degree_identity(const LieAlgebraSpec& spec) {
  const InvariantData data = invariant_data(spec);
  const int sum = std::accumulate(data.degrees.begin(), data.degrees.end(), 0,
                                  [](int acc, int d) { return acc + 2 * d - 1; });
  return sum == data.dim_g;
}

}  // namespace hitchin
