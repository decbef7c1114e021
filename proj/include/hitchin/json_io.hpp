#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitchin/dynamics.hpp"

namespace hitchin {

/// Insertion-ordered so that output bytes follow the code, not key sorting.
using Json = nlohmann::ordered_json;

/// Complex numbers travel as [re, im].
Json to_json(Complex z);
Complex complex_from_json(const Json& j);
Eigen::VectorXcd vector_from_json(const Json& j);

Json to_json(const LieAlgebraSpec& spec);
LieAlgebraSpec spec_from_json(const Json& j);

Json to_json(const HyperellipticCurve& curve);
HyperellipticCurve curve_from_json(const Json& j);

/// [{"i", "kind", "exp"}, ...] in layout order.
Json layout_json(const CoefficientLayout& layout);

Json to_json(const HamiltonianVector& H, const CoefficientLayout& layout);
/// Checks the convention tag and, when present, the layout echo.
HamiltonianVector hamiltonians_from_json(const Json& j, const CoefficientLayout& layout);

Json to_json(const SpectralPoint& p);
SpectralPoint point_from_json(const Json& j);

Json config_json(const PhaseConfiguration& config);
std::vector<SpectralPoint> points_from_json(const Json& j);
std::optional<LieAlgebraSpec> config_spec(const Json& j);

Json to_json(const AngleVector& angles, const CoefficientLayout& layout);
Json to_json(const std::vector<BracketReport>& reports);

/// Parses text, mapping syntax errors to InvalidInput.
Json parse_json(const std::string& text, const std::string& what);
std::string dump(const Json& j);

}  // namespace hitchin
