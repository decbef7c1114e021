#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "hitchin/cli.hpp"
#include "hitchin/json_io.hpp"

using namespace hitchin;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hitchin");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "hitchin_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("key=value arguments") {
  const std::vector<std::string> in{"hitchin", "verify", "commute", "A", "1", "g=2", "seed=7", "quad_tol=1e-9"};
  const std::vector<std::string> expected{"hitchin", "verify", "commute", "A",           "1",   "-g",
                                          "2",       "--seed", "7",       "--quad-tol", "1e-9"};
  CHECK(expand_key_value(in) == expected);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("family sizes") {
  for (const auto& [series, rank, n] : std::vector<std::tuple<std::string, std::string, int>>{
           {"A", "1", 3}, {"A", "2", 8}, {"B", "2", 10}}) {
    const Run r = run({"family", series, rank, "g=2"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["N"].get<int>() == n);
    CHECK(j["layout"].size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("verification subcommands") {
  CHECK(run({"verify", "counts", "A", "3", "g=4"}).code == 0);
  const Run commute = run({"verify", "commute", "A", "1", "g=2", "seed=7"});
  CHECK(commute.code == 0);
  CHECK(Json::parse(commute.out).size() == 3);
  CHECK(run({"verify", "roundtrip", "C", "2", "g=2", "trials=5"}).code == 0);
}

TEST_CASE("identical invocations give identical bytes") {
  const Run a = run({"verify", "commute", "A", "2", "g=2", "seed=3"});
  const Run b = run({"verify", "commute", "A", "2", "g=2", "seed=3"});
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("input errors") {
  CHECK(run({"family", "D", "4"}).code == 2);
  CHECK(run({"family", "A", "0"}).code == 2);
  CHECK(run({"family", "A", "1", "g=1"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  const auto dir = temp_dir();
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(run({"actions", (dir / "bad.json").string(), (dir / "bad.json").string()}).code == 2);
}

TEST_CASE("sample, then recover actions and angles from files") {
  const auto dir = temp_dir();
  const std::string curve = (dir / "curve.json").string();
  const std::string config = (dir / "config.json").string();
  const std::string hfile = (dir / "H.json").string();
  const Run s = run({"sample", "A", "1", "g=2", "seed=5", "--curve-out", curve, "--config-out", config,
                     "--hamiltonians-out", hfile});
  REQUIRE(s.code == 0);

  const Run a = run({"actions", curve, config});
  REQUIRE(a.code == 0);
  std::ifstream in(hfile);
  const Json expected = Json::parse(in);
  const Json got = Json::parse(a.out);
  CHECK(got["convention"] == "urav");
  const Eigen::VectorXcd want = vector_from_json(expected["values"]);
  CHECK(relative_difference(vector_from_json(got["values"]), want) < 1e-10);

  const Run ang = run({"angles", curve, config});
  REQUIRE(ang.code == 0);
  CHECK(Json::parse(ang.out)["values"].size() == 3);
}

TEST_CASE("json round trips") {
  const auto sc = testing::scenario(Series::C, 2, 2, 2);
  const HyperellipticCurve c = curve_from_json(to_json(sc.curve));
  CHECK((c.coeffs() - sc.curve.coeffs()).norm() == 0.0);
  const HamiltonianVector H = hamiltonians_from_json(to_json(sc.H, sc.layout), sc.layout);
  CHECK((H.values - sc.H.values).norm() == 0.0);
  const Json dumped = Json::parse(dump(config_json(sc.config)));
  const std::vector<SpectralPoint> pts = points_from_json(dumped);
  REQUIRE(pts.size() == sc.config.points.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(pts[k].x == sc.config.points[k].x);
    CHECK(pts[k].lambda == sc.config.points[k].lambda);
  }
}
