#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dgsam/errors.hpp"
#include "dgsam/harness/config.hpp"
#include "dgsam/harness/output.hpp"

using namespace dgsam;
using namespace dgsam::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dgsam_harness_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  const Json j = Json::parse(R"({
    "problem": {"family": "quadratic", "quadratic": {"hessians": [[[1, 0], [0, 2]]], "anchor_gradients": [[0.5, 0]]}},
    "initializer": {"kind": "point", "values": [1, 2]},
    "optimizers": [{"kind": "sam", "learning_rate": 0.2, "perturbation_radius": 0.1}],
    "seeds": [3, 4],
    "trajectory_stride": 5,
    "sharpness": {"radius": 0.02, "method": "exact_quadratic"},
    "sharpness_table": {"points": ["anchor", [0.5, 0.5], {"label": "p", "values": [1, 1]}]},
    "landscape": {"center": "anchor", "directions": "axis", "resolution": 3},
    "output_dir": "somewhere"
  })");
  const auto c = parse_config(j);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(c.optimizers.at(0).config.kind == OptimizerKind::Sam);
  const Json again = to_json(c);
  const auto c2 = parse_config(again);
  CHECK(to_json(c2).dump() == again.dump());
}

TEST_CASE("defaults round-trip too") {
  const auto c = parse_config(Json::object());
  CHECK(to_json(parse_config(to_json(c))).dump() == to_json(c).dump());
}

TEST_CASE("unknown keys and bad values are config errors") {
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"seedz": [1]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"problem": {"family": "resnet"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"optimizers": [{"kind": "sgd"}]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"optimizers": [{"kind": "sam", "lr": 1}]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"sharpness": {"radius": 0}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"seeds": "x"})")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("point resolution") {
  const auto c = parse_config(Json::parse(R"({"initializer": {"kind": "point", "values": [0.5, 0.25]}})"));
  const auto built = build_problem(c.problem);
  PointSpec p;
  p.kind = PointSpec::Kind::FakeFlatMinimum;
  CHECK(resolve_point(p, c, built, 0) == built.landscape->fake_flat_minimum());
  p.kind = PointSpec::Kind::Initializer;
  CHECK(resolve_point(p, c, built, 0) == ParameterVector{0.5, 0.25});
  p.kind = PointSpec::Kind::Explicit;
  p.values = {1.0, 2.0, 3.0};
  CHECK_THROWS(resolve_point(p, c, built, 0));
  p.kind = PointSpec::Kind::Checkpoint;
  p.manifest = "/nonexistent/manifest.json";
  p.run = "dgsam_seed0";
  CHECK_THROWS_AS(resolve_point(p, c, built, 0), ConfigError);
}

TEST_CASE("CSV formatting is RFC-4180 with CRLF") {
  CsvTable t({"a", "b"});
  t.add_row({"x,y", "say \"hi\""});
  t.add_numeric_row({0.1, 2.0});
  CHECK(t.str() == "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n0.1,2\r\n");
  CHECK_THROWS(t.add_row({"only one"}));
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(0.30000000000000004) == "0.30000000000000004");
}

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("manifest lists every file and detects tampering") {
  const auto dir = scratch("manifest");
  {
    OutputDirectory out(dir);
    out.write("a.txt", "alpha");
    CsvTable t({"x"});
    t.add_numeric_row({1.0});
    out.write_csv("b.csv", t);
    out.write_manifest(Json{{"command", "test"}});
  }
  CHECK(verify_manifest(dir / "manifest.json").empty());
  std::ofstream(dir / "a.txt") << "tampered";
  const auto bad = verify_manifest(dir / "manifest.json");
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("a.txt") != std::string::npos);
  std::filesystem::remove_all(dir);
}
