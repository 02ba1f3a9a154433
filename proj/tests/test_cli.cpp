#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gph/experiments.hpp"

using namespace gph;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kConserveCfg = R"({
  "experiment": "conserve",
  "grid": {"d": 1, "n": 32, "L": 6.283185307179586},
  "params": {"p": 2, "mu": 1.0, "dt": 1e-3, "T": 0.05, "M_max": 4},
  "mixture": [
    {"type": "plane_wave", "mode": 1, "weight": 0.5},
    {"type": "gaussian", "center": 3.1, "width": 0.9, "weight": 0.5}
  ],
  "seed": 5
})";

}  // namespace

TEST_CASE("minimal config parses with defaults applied") {
  ExperimentConfig c = parse_config_text(R"({"experiment": "conserve",
    "mixture": [{"type": "plane_wave", "mode": 1}]})");
  CHECK(c.d == 1);
  CHECK(c.n == 64);
  CHECK(c.L == doctest::Approx(6.283185307179586));
  CHECK(c.p == 2);
  CHECK(c.mu == 1.0);
  CHECK(c.dt == doctest::Approx(1e-3));
  CHECK(c.T == doctest::Approx(1.0));
  CHECK(c.M_max == 8);
}

TEST_CASE("parse and validation failures carry distinct exit codes") {
  try {
    parse_config_text("{not json");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.exit_code == kParseError);
  }
  // focusing chain with alpha*kp >= 1 violates the subcritical window
  try {
    parse_config_text(R"({"experiment": "chain", "regime": "focusing",
      "params": {"mu": -0.1, "alpha": 0.6},
      "mixture": [{"type": "plane_wave", "mode": 2}]})");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.exit_code == kValidationError);
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
  try {
    parse_config_text(R"({"experiment": "nls", "grid": {"n": 20},
      "mixture": [{"type": "plane_wave", "mode": 1}]})");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.exit_code == kValidationError);
    CHECK(std::string(e.what()).find("grid.n") != std::string::npos);
  }
}

TEST_CASE("config serialization round trip") {
  ExperimentConfig c = parse_config_text(kConserveCfg);
  ExperimentConfig back = parse_config_text(serialize_config(c));
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("conserve run emits the kseries schema and a complete manifest") {
  ExperimentConfig c = parse_config_text(kConserveCfg);
  fs::path dir = fresh_dir("gph_cli_conserve");
  c.out_dir = dir.string();
  RunManifest man = run_experiment(c);

  std::string csv = slurp(dir / "kseries.csv");
  CHECK(csv.rfind("t,m,K_m,rel_drift\n", 0) == 0);
  CHECK(man.files.size() == 1);
  CHECK(fs::exists(dir / "manifest.json"));
  std::string mj = slurp(dir / "manifest.json");
  CHECK(mj.find("kseries.csv") != std::string::npos);
  CHECK(mj.find("checksum") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  ExperimentConfig c = parse_config_text(kConserveCfg);
  fs::path d1 = fresh_dir("gph_cli_det1");
  fs::path d2 = fresh_dir("gph_cli_det2");
  c.out_dir = d1.string();
  run_experiment(c);
  c.out_dir = d2.string();
  run_experiment(c);
  CHECK(slurp(d1 / "kseries.csv") == slurp(d2 / "kseries.csv"));

  // a different seed changes seeded experiments; conserve has fixed states,
  // so check with the cancel experiment instead
  ExperimentConfig cc;
  cc = parse_config_text(R"({"experiment": "cancel",
    "grid": {"d": 1, "n": 8, "L": 6.283185307179586},
    "params": {"p": 2, "mu": 1.0}, "cancel_inputs": 3, "seed": 9})");
  fs::path d3 = fresh_dir("gph_cli_det3");
  fs::path d4 = fresh_dir("gph_cli_det4");
  cc.out_dir = d3.string();
  run_experiment(cc);
  cc.seed = 10;
  cc.out_dir = d4.string();
  run_experiment(cc);
  CHECK(slurp(d3 / "cancel.csv") != slurp(d4 / "cancel.csv"));
}

TEST_CASE("cli binary: exit codes and determinism end to end") {
  const char* cli = std::getenv("GPH_CLI");
  REQUIRE(cli != nullptr);
  fs::path dir = fresh_dir("gph_cli_bin");
  fs::path cfg = dir / "cfg.json";
  {
    std::ofstream os(cfg);
    os << kConserveCfg;
  }
  auto run = [&](const std::string& args) {
    return std::system((std::string(cli) + " " + args + " > /dev/null 2>&1")
                           .c_str());
  };
  int rc = run("conserve --config " + cfg.string() + " --out " +
               (dir / "out1").string());
  CHECK(WEXITSTATUS(rc) == 0);
  rc = run("conserve --config " + cfg.string() + " --out " +
           (dir / "out2").string());
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(slurp(dir / "out1" / "kseries.csv") ==
        slurp(dir / "out2" / "kseries.csv"));

  rc = run("conserve --config " + (dir / "missing.json").string());
  CHECK(WEXITSTATUS(rc) == 2);

  fs::path bad = dir / "bad.json";
  {
    std::ofstream os(bad);
    os << R"({"experiment": "conserve", "grid": {"n": 20},
             "mixture": [{"type": "plane_wave", "mode": 1}]})";
  }
  rc = run("conserve --config " + bad.string());
  CHECK(WEXITSTATUS(rc) == 3);
}

TEST_CASE("mem cap env var controls the capacity gate") {
  // the cap is read once per process, so exercise it through the CLI
  const char* cli = std::getenv("GPH_CLI");
  REQUIRE(cli != nullptr);
  fs::path dir = fresh_dir("gph_cli_cap");
  fs::path cfg = dir / "cfg.json";
  {
    std::ofstream os(cfg);
    os << R"({"experiment": "cancel",
      "grid": {"d": 1, "n": 16, "L": 6.283185307179586},
      "params": {"p": 2, "mu": 1.0}, "cancel_inputs": 1, "seed": 1})";
  }
  int rc = std::system((std::string("GPH_MEM_CAP=1000 ") + cli +
                        " cancel --config " + cfg.string() + " --out " +
                        (dir / "out").string() + " > /dev/null 2>&1")
                           .c_str());
  CHECK(WEXITSTATUS(rc) == 4);  // capacity error surfaces as numerical failure
}
