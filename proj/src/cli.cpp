#include "hitchin/cli.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hitchin/error.hpp"
#include "hitchin/json_io.hpp"

namespace hitchin {
namespace {

struct Settings {
  std::string series;
  int rank = 1;
  int genus = 2;
  std::uint64_t seed = 1;
  int trials = 100;
  double quad_tol = 1e-9;
  double fd_step = 1e-5;
  int stencil_order = 4;
  double tol_commute = 1e-6;
  double tol_darboux = 1e-3;
  double tol_roundtrip = 1e-10;
  double safety_margin = 0.0;
  std::optional<double> base_x;
  std::string kind;
  std::string curve_file;
  std::string config_file;
  std::string hamiltonians_file;
  std::string out_file;
  std::string manifest_file;
  std::string curve_out;
  std::string config_out;
  std::string hamiltonians_out;
  bool json = false;
};

struct Inputs {
  Json hashes = Json::object();

  Json load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(text);
    hashes[path] = hex.str();
    return parse_json(text, path);
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
}

LieAlgebraSpec spec_of(const Settings& s) { return LieAlgebraSpec::make(parse_series(s.series), s.rank); }

AngleOptions angle_options(const Settings& s) {
  AngleOptions o;
  o.quad_tol = s.quad_tol;
  o.safety_margin = s.safety_margin;
  o.base_x = s.base_x;
  return o;
}

VerifyOptions verify_options(const Settings& s) {
  VerifyOptions o;
  o.fd_step = s.fd_step;
  o.stencil_order = s.stencil_order;
  o.tol_commute = s.tol_commute;
  o.tol_darboux = s.tol_darboux;
  o.angles = angle_options(s);
  return o;
}

// Seeds for the random curve and Hamiltonians are derived from --seed so one
// integer reproduces a whole run.
std::uint64_t curve_seed(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ULL + 11; }
std::uint64_t hamiltonian_seed(std::uint64_t seed) { return seed * 0xBF58476D1CE4E5B9ULL + 23; }

HyperellipticCurve curve_for(const Settings& s, Inputs& inputs) {
  if (!s.curve_file.empty()) return curve_from_json(inputs.load(s.curve_file));
  return random_curve(s.genus, curve_seed(s.seed));
}

HamiltonianVector hamiltonians_for(const Settings& s, Inputs& inputs, const CoefficientLayout& layout) {
  if (!s.hamiltonians_file.empty()) return hamiltonians_from_json(inputs.load(s.hamiltonians_file), layout);
  return random_hamiltonians(layout, hamiltonian_seed(s.seed));
}

BracketReport count_report(int a, int b, std::string what, long value, long target) {
  return {{a, b}, {std::move(what), ""}, Complex(static_cast<double>(value)), Complex(static_cast<double>(target)),
          0.0,    0.0, value == target};
}

std::vector<BracketReport> verify_counts(const Settings& s) {
  const LieAlgebraSpec spec = spec_of(s);
  const CoefficientLayout layout(spec, s.genus);
  const InvariantData& inv = layout.invariants();
  std::vector<BracketReport> reports;
  long sum = 0;
  for (const int d : inv.degrees) sum += 2 * d - 1;
  reports.push_back(count_report(0, 0, "sum(2d-1) = dim g", sum, inv.dim_g));
  for (int i = 1; i <= layout.rank(); ++i) {
    const int d = layout.degree(i);
    reports.push_back(count_report(i, 0, "block size of invariant " + std::to_string(i),
                                   layout.block_end(i) - layout.block_begin(i), (2L * d - 1) * (s.genus - 1)));
  }
  reports.push_back(count_report(0, 1, "N = dim g (g-1)", layout.size(), static_cast<long>(inv.dim_g) * (s.genus - 1)));
  return reports;
}

std::vector<BracketReport> verify_roundtrip(const Settings& s, Inputs& inputs) {
  const LieAlgebraSpec spec = spec_of(s);
  const HyperellipticCurve curve = curve_for(s, inputs);
  const CoefficientLayout layout(spec, curve.genus());
  SampleOptions sample;
  sample.verify_roundtrip = false;
  std::vector<BracketReport> reports;
  for (int t = 0; t < s.trials; ++t) {
    const std::uint64_t seed = s.seed + static_cast<std::uint64_t>(t);
    const HamiltonianVector H = random_hamiltonians(layout, hamiltonian_seed(seed));
    const PhaseConfiguration config = sample_config(curve, spec, H, seed, sample);
    const double rel = relative_difference(solve_actions(config).values, H.values);
    reports.push_back({{t, 0}, {"trial " + std::to_string(t), "relative error"}, Complex(rel), Complex(0), 0.0,
                       s.tol_roundtrip, rel < s.tol_roundtrip});
  }
  return reports;
}

Json family_json(const Settings& s) {
  const LieAlgebraSpec spec = spec_of(s);
  const CoefficientLayout layout(spec, s.genus);
  const InvariantData& inv = layout.invariants();
  Json j;
  j["spec"] = to_json(spec);
  j["name"] = spec.name();
  j["genus"] = s.genus;
  j["dim_g"] = inv.dim_g;
  j["n_standard"] = inv.n_standard;
  j["N"] = layout.size();
  Json table = Json::array();
  for (int i = 1; i <= layout.rank(); ++i) {
    const int d = layout.degree(i);
    Json row;
    row["invariant"] = i;
    row["degree"] = d;
    row["even"] = d * (s.genus - 1) + 1;
    row["odd"] = (d - 1) * (s.genus - 1) - 1;
    row["size"] = layout.block_end(i) - layout.block_begin(i);
    row["lambda_power"] = inv.n_standard - d;
    table.push_back(row);
  }
  j["degrees"] = table;
  j["layout"] = layout_json(layout);
  return j;
}

PhaseConfiguration load_configuration(const Settings& s, Inputs& inputs) {
  const HyperellipticCurve curve = curve_from_json(inputs.load(s.curve_file));
  const Json cj = inputs.load(s.config_file);
  std::optional<LieAlgebraSpec> spec = config_spec(cj);
  if (!s.series.empty()) spec = spec_of(s);
  if (!spec) throw Error(ErrorKind::InvalidInput, "no Lie algebra given: use --series/--rank or a \"spec\" field");
  return make_configuration(curve, *spec, points_from_json(cj));
}

Json manifest(const std::vector<std::string>& args, const Settings& s, const Inputs& inputs) {
  Json m;
  m["version"] = std::string(kToolVersion);
  m["invocation"] = args;
  m["seed"] = s.seed;
  Json tol;
  tol["quad_tol"] = s.quad_tol;
  tol["fd_step"] = s.fd_step;
  tol["stencil_order"] = s.stencil_order;
  tol["tol_commute"] = s.tol_commute;
  tol["tol_darboux"] = s.tol_darboux;
  tol["tol_roundtrip"] = s.tol_roundtrip;
  m["tolerances"] = tol;
  m["inputs"] = inputs.hashes;
  return m;
}

}  // namespace

std::vector<std::string> expand_key_value(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    const auto eq = a.find('=');
    const bool plain_key = k > 0 && eq != std::string::npos && eq > 0 && a[0] != '-' &&
                           std::all_of(a.begin(), a.begin() + static_cast<long>(eq), [](char c) {
                             return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
                           });
    if (!plain_key) {
      out.push_back(a);
      continue;
    }
    std::string key = a.substr(0, eq);
    std::replace(key.begin(), key.end(), '_', '-');
    out.push_back(key.size() == 1 ? "-" + key : "--" + key);
    out.push_back(a.substr(eq + 1));
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> expanded = expand_key_value(args);
  Settings s;

  CLI::App app{"Action-angle toolkit for spectral-curve integrable systems on hyperelliptic curves"};
  app.name(args.empty() ? "hitchin" : args[0]);
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.add_option("--seed", s.seed, "random seed");
  app.add_option("-g,--genus", s.genus, "genus of the base curve")->check(CLI::PositiveNumber);
  app.add_option("--quad-tol", s.quad_tol, "absolute quadrature tolerance");
  app.add_option("--fd-step", s.fd_step, "relative finite-difference step");
  app.add_option("--stencil-order", s.stencil_order, "finite-difference stencil order")
      ->check(CLI::IsMember({2, 4}));
  app.add_option("--tol-commute", s.tol_commute, "commutativity tolerance, relative to max(1,|H|^2)");
  app.add_option("--tol-darboux", s.tol_darboux, "Darboux tolerance");
  app.add_option("--tol-roundtrip", s.tol_roundtrip, "action round-trip tolerance");
  app.add_option("--trials", s.trials, "round-trip trials")->check(CLI::PositiveNumber);
  app.add_option("--safety-margin", s.safety_margin, "path safety margin (<= 0: automatic)");
  app.add_option("--base-x", s.base_x, "real abscissa of the angle base point");
  app.add_option("--curve", s.curve_file, "curve JSON (verify: overrides the random curve)");
  app.add_option("--hamiltonians", s.hamiltonians_file, "Hamiltonian JSON (verify: overrides the random H)");
  app.add_option("--series", s.series, "series when the configuration has no \"spec\"");
  app.add_option("--rank", s.rank, "rank when the configuration has no \"spec\"");
  app.add_option("--out", s.out_file, "write the result here instead of stdout");
  app.add_option("--manifest", s.manifest_file, "write the run manifest here");
  app.add_flag("--json", s.json, "JSON output only (no summary on stderr)");

  auto* family = app.add_subcommand("family", "print the coefficient layout, N and the degree table");
  family->add_option("series", s.series)->required();
  family->add_option("rank", s.rank)->required();

  auto* actions = app.add_subcommand("actions", "solve for the Hamiltonians of a configuration");
  actions->add_option("curve", s.curve_file)->required();
  actions->add_option("config", s.config_file)->required();

  auto* angles = app.add_subcommand("angles", "compute the angle coordinates of a configuration");
  angles->add_option("curve", s.curve_file)->required();
  angles->add_option("config", s.config_file)->required();

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("kind", s.kind)->required()->check(CLI::IsMember({"counts", "roundtrip", "commute", "darboux"}));
  verify->add_option("series", s.series)->required();
  verify->add_option("rank", s.rank)->required();

  auto* sample = app.add_subcommand("sample", "draw a random curve, Hamiltonians and configuration");
  sample->add_option("series", s.series)->required();
  sample->add_option("rank", s.rank)->required();
  sample->add_option("--curve-out", s.curve_out, "also write the curve JSON here");
  sample->add_option("--config-out", s.config_out, "also write the configuration JSON here");
  sample->add_option("--hamiltonians-out", s.hamiltonians_out, "also write the Hamiltonian JSON here");

  try {
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInputError;
  }

  Inputs inputs;
  try {
    Json result;
    int status = kExitPass;
    std::vector<BracketReport> reports;
    bool is_report = false;

    if (family->parsed()) {
      result = family_json(s);
    } else if (actions->parsed()) {
      const PhaseConfiguration config = load_configuration(s, inputs);
      result = to_json(solve_actions(config), config.layout);
    } else if (angles->parsed()) {
      const PhaseConfiguration config = load_configuration(s, inputs);
      const AngleResult r = angle_coordinates(config, angle_options(s));
      result = to_json(r.angles, config.layout);
      result["error_estimate"] = r.error_estimate;
    } else if (sample->parsed()) {
      const LieAlgebraSpec spec = spec_of(s);
      const HyperellipticCurve curve = curve_for(s, inputs);
      const CoefficientLayout layout(spec, curve.genus());
      const HamiltonianVector H = hamiltonians_for(s, inputs, layout);
      const PhaseConfiguration config = sample_config(curve, spec, H, s.seed);
      result["curve"] = to_json(curve);
      result["hamiltonians"] = to_json(H, layout);
      result["config"] = config_json(config);
      if (!s.curve_out.empty()) write_file(s.curve_out, dump(result["curve"]));
      if (!s.hamiltonians_out.empty()) write_file(s.hamiltonians_out, dump(result["hamiltonians"]));
      if (!s.config_out.empty()) write_file(s.config_out, dump(result["config"]));
    } else if (verify->parsed()) {
      is_report = true;
      if (s.kind == "counts") {
        reports = verify_counts(s);
      } else if (s.kind == "roundtrip") {
        reports = verify_roundtrip(s, inputs);
      } else {
        const LieAlgebraSpec spec = spec_of(s);
        const HyperellipticCurve curve = curve_for(s, inputs);
        const CoefficientLayout layout(spec, curve.genus());
        const HamiltonianVector H = hamiltonians_for(s, inputs, layout);
        reports = s.kind == "commute" ? verify_commutativity(curve, spec, H, s.seed, verify_options(s))
                                      : verify_darboux(curve, spec, H, s.seed, verify_options(s));
      }
      result = to_json(reports);
      status = all_pass(reports) ? kExitPass : kExitVerificationFailure;
    }

    const std::string text = dump(result);
    if (s.out_file.empty()) {
      out << text;
    } else {
      write_file(s.out_file, text);
    }
    if (!s.manifest_file.empty()) write_file(s.manifest_file, dump(manifest(args, s, inputs)));
    if (is_report && !s.json) {
      const auto passed = std::count_if(reports.begin(), reports.end(), [](const BracketReport& r) { return r.pass; });
      err << s.kind << ": " << passed << "/" << reports.size() << " checks pass\n";
    }
    return status;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitInputError : kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

}  // namespace hitchin
