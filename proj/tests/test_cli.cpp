#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dgsam/harness/output.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = DGSAM_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dgsam_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(DGSAM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto p = dir / "config.json";
  std::ofstream(p) << body;
  return p;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

const char* kSmallRun = R"({
  "problem": {"family": "fake_flat"},
  "initializer": {"kind": "uniform"},
  "optimizers": [{"kind": "erm", "max_iterations": 30}, {"kind": "sam", "max_iterations": 30},
                 {"kind": "dgsam", "max_iterations": 30}],
  "seeds": [0, 1, 2],
  "sharpness_table": {"points": ["flat_minimum", "fake_flat_minimum"]}
})";

}  // namespace

TEST_CASE("missing or malformed configs exit with 2") {
  const auto dir = scratch("bad");
  CHECK(cli("--config /nonexistent.json run") == 2);
  CHECK(cli("run") == 2);
  CHECK(cli("--config " + write_config(dir, "{ not json").string() + " run") == 2);
  CHECK(cli("--config " + write_config(dir, R"({"typo_key": 1})").string() + " run") == 2);
  CHECK(cli("--config " + kConfigs.string() + "/fake_flat.json bogus-command") == 2);
}

TEST_CASE("run writes one trajectory per optimizer and seed, deterministically") {
  const auto dir = scratch("run");
  const auto cfg = write_config(dir, kSmallRun);
  REQUIRE(cli("--config " + cfg.string() + " --out " + (dir / "a").string() + " --threads 3 run") == 0);
  REQUIRE(cli("--config " + cfg.string() + " --out " + (dir / "b").string() + " run") == 0);
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) csvs += e.path().extension() == ".csv";
  CHECK(csvs == 9);
  CHECK(fs::exists(dir / "a" / "manifest.json"));
  CHECK(dgsam::harness::verify_manifest(dir / "a" / "manifest.json").empty());
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    if (e.path().extension() == ".csv") {
      CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
    }
  }
  const auto ma = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(ma["files"] == mb["files"]);
  // Every file in the directory is indexed by the manifest.
  CHECK(ma["files"].size() + 1 == static_cast<std::size_t>(std::distance(fs::directory_iterator(dir / "a"), {})));
}

TEST_CASE("sharpness table from a run checkpoint, with manifest-driven points") {
  const auto dir = scratch("table");
  const auto cfg = write_config(dir, kSmallRun);
  REQUIRE(cli("--config " + cfg.string() + " --out " + (dir / "run").string() + " run") == 0);
  const std::string body = std::string(R"({"problem": {"family": "fake_flat"},
    "sharpness_table": {"points": [{"manifest": ")") + (dir / "run" / "manifest.json").string() +
                           R"(", "run": "dgsam_seed1"}, "flat_minimum"]}})";
  const auto cfg2 = dir / "table.json";
  std::ofstream(cfg2) << body;
  REQUIRE(cli("--config " + cfg2.string() + " --out " + (dir / "t1").string() + " sharpness-table") == 0);
  REQUIRE(cli("--config " + cfg2.string() + " --out " + (dir / "t2").string() + " sharpness-table") == 0);
  const auto csv = slurp(dir / "t1" / "sharpness_table.csv");
  CHECK(csv == slurp(dir / "t2" / "sharpness_table.csv"));
  CHECK(csv.rfind("point,domain_1,domain_2,mean,std,total\r\n", 0) == 0);
  CHECK(count_lines(csv) == 3);
  const std::string missing = R"({"problem": {"family": "fake_flat"},
    "sharpness_table": {"points": [{"manifest": "/nonexistent/manifest.json", "run": "x"}]}})";
  std::ofstream(dir / "missing.json") << missing;
  CHECK(cli("--config " + (dir / "missing.json").string() + " --out " + (dir / "t3").string() +
            " sharpness-table") == 2);
}

TEST_CASE("unseen column appears only with a held-out domain") {
  const auto dir = scratch("unseen");
  const auto cfg = write_config(dir, R"({
    "problem": {"family": "mlp", "mlp": {"layers": [2, 4, 2], "held_out": [2],
                "dataset": {"domains": 3, "points_per_domain": 40}}},
    "initializer": {"kind": "network"},
    "sharpness": {"ascent_steps": 5, "restarts": 1},
    "sharpness_table": {"points": ["initializer"]}
  })");
  REQUIRE(cli("--config " + cfg.string() + " --out " + (dir / "o").string() + " sharpness-table") == 0);
  CHECK(slurp(dir / "o" / "sharpness_table.csv").rfind("point,domain_1,domain_2,mean,std,total,unseen_1\r\n", 0) == 0);
}

TEST_CASE("landscape with resolution 2 has four rows") {
  const auto dir = scratch("landscape");
  const auto cfg = write_config(dir, R"({"problem": {"family": "fake_flat"},
    "landscape": {"center": "flat_minimum", "resolution": 2}})");
  REQUIRE(cli("--config " + cfg.string() + " --out " + (dir / "o").string() + " landscape") == 0);
  const auto csv = slurp(dir / "o" / "landscape.csv");
  CHECK(count_lines(csv) == 5);
  CHECK(csv.rfind("u,v,loss_total,loss_domain_1,loss_domain_2\r\n", 0) == 0);
}

TEST_CASE("perturb-trace at zero radius gives zero increments") {
  const auto dir = scratch("trace");
  const auto cfg = write_config(dir, R"({"problem": {"family": "fake_flat"},
    "perturb_trace": {"rho": 0.0, "point": "fake_flat_minimum"}})");
  REQUIRE(cli("--config " + cfg.string() + " --out " + (dir / "o").string() + " perturb-trace") == 0);
  for (const char* f : {"trace_total.csv", "trace_sequential.csv"}) {
    std::istringstream in(slurp(dir / "o" / f));
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,loss_domain_1,loss_domain_2\r");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(line.substr(line.find(',')) == ",0,0\r");
    }
    CHECK(rows == 3);
  }
}

TEST_CASE("cost reports the exact evaluation ratio") {
  const auto dir = scratch("cost");
  const auto cfg = write_config(dir, R"({"problem": {"family": "quadratic", "quadratic": {
      "hessians": [[[1]], [[2]], [[3]]], "anchor_gradients": [[1], [0], [-1]]}},
    "initializer": {"kind": "point", "values": [1]},
    "optimizers": [{"kind": "erm"}, {"kind": "sam"}, {"kind": "dgsam"}],
    "cost": {"warmup": 2, "timed": 10}})");
  REQUIRE(cli("--config " + cfg.string() + " --out " + (dir / "o").string() + " cost") == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "o" / "cost.json"));
  CHECK(j["expected_ratio"] == "3:6:4");
  CHECK(j["optimizers"][0]["grad_evals_per_iter"] == 3);
  CHECK(j["optimizers"][1]["grad_evals_per_iter"] == 6);
  CHECK(j["optimizers"][2]["grad_evals_per_iter"] == 4);
}

TEST_CASE("spectrum on diag(1,2,3)") {
  const auto dir = scratch("spectrum");
  REQUIRE(cli("--config " + (kConfigs / "quadratic_spectrum.json").string() + " --out " +
              (dir / "o").string() + " spectrum") == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "o" / "spectrum.json"));
  CHECK(j["moment1"].get<double>() == doctest::Approx(2.0));
  CHECK(j["moment2"].get<double>() == doctest::Approx(14.0 / 3.0));
  CHECK(j["density_mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("verify-theory default suite passes and divergence exits 3") {
  const auto dir = scratch("verify");
  CHECK(cli("--config " + (kConfigs / "verify_theory.json").string() + " --out " + (dir / "o").string() +
            " --threads 4 verify-theory") == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "o" / "verify_theory.json"));
  CHECK(j["theorem1"]["passes"] == 200);
  CHECK(j["failures"] == 0);
  const auto cfg = write_config(dir, R"({"problem": {"family": "quadratic", "quadratic": {
      "hessians": [[[1]]], "anchor_gradients": [[1]]}},
    "initializer": {"kind": "point", "values": [1]},
    "optimizers": [{"kind": "erm", "learning_rate": 1e6, "max_iterations": 1000}]})");
  CHECK(cli("--config " + cfg.string() + " --out " + (dir / "div").string() + " run") == 3);
  CHECK(fs::exists(dir / "div" / "manifest.json"));
  CHECK(fs::exists(dir / "div" / "run_erm_seed0.csv"));
}
