#include "hitchin/json_io.hpp"

#include "hitchin/error.hpp"

namespace hitchin {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad("complex numbers must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::VectorXcd vector_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of complex numbers");
  Eigen::VectorXcd out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) out(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return out;
}

Json to_json(const LieAlgebraSpec& spec) {
  Json j;
  j["series"] = std::string(to_string(spec.series()));
  j["rank"] = spec.rank();
  return j;
}

LieAlgebraSpec spec_from_json(const Json& j) {
  const Json& series = field(j, "series");
  if (!series.is_string()) bad("\"series\" must be a string");
  return LieAlgebraSpec::make(parse_series(series.get<std::string>()), integer(field(j, "rank"), "\"rank\""));
}

Json to_json(const HyperellipticCurve& curve) {
  Json j;
  j["genus"] = curve.genus();
  Json coeffs = Json::array();
  for (Eigen::Index k = 0; k < curve.coeffs().size(); ++k) coeffs.push_back(to_json(curve.coeffs()(k)));
  j["coeffs"] = coeffs;
  return j;
}

HyperellipticCurve curve_from_json(const Json& j) {
  return HyperellipticCurve(integer(field(j, "genus"), "\"genus\""), vector_from_json(field(j, "coeffs")));
}

Json layout_json(const CoefficientLayout& layout) {
  Json out = Json::array();
  for (const BasisMonomial& m : layout.monomials()) {
    Json e;
    e["i"] = m.invariant;
    e["kind"] = std::string(to_string(m.kind));
    e["exp"] = m.exponent;
    out.push_back(e);
  }
  return out;
}

Json to_json(const HamiltonianVector& H, const CoefficientLayout& layout) {
  Json j;
  j["convention"] = "urav";
  j["spec"] = to_json(layout.spec());
  j["genus"] = layout.genus();
  j["layout"] = layout_json(layout);
  Json values = Json::array();
  for (Eigen::Index k = 0; k < H.values.size(); ++k) values.push_back(to_json(H.values(k)));
  j["values"] = values;
  return j;
}

HamiltonianVector hamiltonians_from_json(const Json& j, const CoefficientLayout& layout) {
  if (j.contains("convention") && j.at("convention") != "urav") bad("unsupported Hamiltonian sign convention");
  if (j.contains("layout") && j.at("layout") != layout_json(layout)) bad("Hamiltonian layout echo does not match");
  HamiltonianVector H{vector_from_json(field(j, "values"))};
  if (H.values.size() != layout.size()) {
    bad("expected " + std::to_string(layout.size()) + " Hamiltonians, got " + std::to_string(H.values.size()));
  }
  return H;
}

Json to_json(const SpectralPoint& p) {
  Json j;
  j["x"] = to_json(p.x);
  j["y"] = to_json(p.y);
  j["lambda"] = to_json(p.lambda);
  return j;
}

SpectralPoint point_from_json(const Json& j) {
  return {complex_from_json(field(j, "x")), complex_from_json(field(j, "y")), complex_from_json(field(j, "lambda"))};
}

Json config_json(const PhaseConfiguration& config) {
  Json j;
  j["spec"] = to_json(config.layout.spec());
  Json points = Json::array();
  for (const SpectralPoint& p : config.points) points.push_back(to_json(p));
  j["points"] = points;
  return j;
}

std::vector<SpectralPoint> points_from_json(const Json& j) {
  const Json& points = field(j, "points");
  if (!points.is_array()) bad("\"points\" must be an array");
  std::vector<SpectralPoint> out;
  for (const Json& p : points) out.push_back(point_from_json(p));
  return out;
}

std::optional<LieAlgebraSpec> config_spec(const Json& j) {
  if (!j.is_object() || !j.contains("spec")) return std::nullopt;
  return spec_from_json(j.at("spec"));
}

Json to_json(const AngleVector& angles, const CoefficientLayout& layout) {
  Json j;
  Json values = Json::array();
  for (Eigen::Index k = 0; k < angles.values.size(); ++k) values.push_back(to_json(angles.values(k)));
  j["values"] = values;
  j["base_point"] = to_json(angles.base_point);
  j["layout"] = layout_json(layout);
  return j;
}

Json to_json(const std::vector<BracketReport>& reports) {
  Json out = Json::array();
  for (const BracketReport& r : reports) {
    Json e;
    e["pair"] = Json::array({r.pair[0], r.pair[1]});
    e["label"] = Json::array({r.labels[0], r.labels[1]});
    e["value"] = to_json(r.value);
    e["target"] = to_json(r.target);
    e["tol"] = r.tolerance;
    e["step"] = r.step;
    e["pass"] = r.pass;
    out.push_back(e);
  }
  return out;
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad("cannot parse " + what + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hitchin
