#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lqg/cli/runner.hpp"
#include "lqg/cli/suites.hpp"
#include "lqg/levy/csbp.hpp"

using namespace lqg;
using namespace lqg::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    const auto c = parse_config(text);
    find_suite(c.suite).validate(c);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.suite = "ball-volume";
  c.seed = 12345678901234ull;
  c.workers = 3;
  c.out = "some/dir";
  c.params = {{"brownian_map", {{"n", 4096}, {"r_lo", 0.1}, {"variant", "brownian"}}}, {"save_samples", true}};
  const auto back = parse_config(to_json(c).dump());
  CHECK(back == c);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 64);
  ExperimentConfig other = c;
  other.seed += 1;
  CHECK(config_hash(other) != config_hash(c));
  other = c;
  other.out = "elsewhere";
  CHECK(config_hash(other) == config_hash(c));

  const auto defaults = default_params();
  ExperimentConfig d;
  d.suite = "lbm-exit";
  d.params = defaults;
  CHECK_NOTHROW(find_suite(d.suite).validate(d));
  CHECK(parse_config(to_json(d).dump()) == d);
  CHECK(defaults.at("gmc_lbm").at("n") == 1024);
  CHECK(defaults.at("brownian_map").at("variant") == "dyck");
}

TEST_CASE("sha256 known answer") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config errors name the line or field") {
  CHECK(error_of("{\"suite\": \"phi-table\",\n  \"seed\": }") == "config line 2, column 11: malformed JSON");
  CHECK(error_of("{\"suite\": \"nope\"}").find("unknown suite \"nope\"") != std::string::npos);
  CHECK(error_of("{\"seed\": 1}") == "config.suite: missing");
  CHECK(error_of("{\"suite\": \"phi-table\", \"colour\": 1}") == "config.colour: unknown field");
  CHECK(error_of("{\"suite\": \"phi-table\", \"seed\": -1}").rfind("config.seed: expected a non-negative integer", 0) == 0);
  CHECK(error_of("{\"suite\": \"phi-table\", \"workers\": 0}") == "config.workers: must be at least 1");
  CHECK(error_of("{\"suite\": \"phi-table\", \"params\": {\"levy\": {}}}") == "params.levy: unknown module");
  CHECK(error_of("{\"suite\": \"lbm-exit\", \"params\": {\"gmc_lbm\": {\"n\": \"big\"}}}") ==
        "params.gmc_lbm.n: expected a non-negative integer, got \"big\"");
  CHECK(error_of("{\"suite\": \"lbm-exit\", \"params\": {\"gmc_lbm\": {\"nn\": 1}}}") == "params.gmc_lbm.nn: unknown field");
  CHECK(error_of("{\"suite\": \"lbm-exit\", \"params\": {\"gmc_lbm\": {\"n\": 1000}}}").rfind("params.gmc_lbm: ", 0) == 0);
  CHECK(error_of("{\"suite\": \"ball-volume\", \"params\": {\"brownian_map\": {\"variant\": \"tree\"}}}").rfind(
            "params.brownian_map.variant", 0) == 0);
  CHECK(error_of("{\"suite\": \"phi-table\", \"params\": {\"save_samples\": 1}}") ==
        "params.save_samples: expected a boolean");
}

TEST_CASE("suite listing") {
  std::vector<std::string> names;
  for (const auto& s : suites()) {
    names.push_back(s.name);
    CHECK(!s.description.empty());
  }
  CHECK(names.front() == "exact-law");
  for (const char* want : {"appendix-b", "ball-volume", "lbm-heatkernel", "phi-table", "csbp-extinction"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  std::vector<std::string> again;
  for (const auto& s : suites()) again.push_back(s.name);
  CHECK(again == names);
  for (const auto& a : acceptance_suites()) CHECK_NOTHROW(find_suite(a));
}

TEST_CASE("phi-table run writes curves, reports and manifest") {
  TempDir dir("lqg_cli_phi");
  ExperimentConfig c;
  c.suite = "phi-table";
  c.out = dir.path;
  std::ostringstream log;
  REQUIRE(run_suite(c, log) == kOk);
  const auto csv = slurp(dir.path / "phi_table.csv");
  CHECK(csv.rfind("beta,kappa,r,t,phi_numeric,phi0_closed,relative_error,lemma_ratio\n", 0) == 0);
  std::istringstream rows(csv);
  std::string row;
  std::getline(rows, row);
  std::size_t power = 0;
  while (std::getline(rows, row)) {
    std::vector<double> v;
    std::istringstream cells(row);
    for (std::string cell; std::getline(cells, cell, ',');) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 8);
    if (v[1] == 0) {
      ++power;
      CHECK(std::abs(v[4] - v[5]) <= 1e-6 * v[5]);
    }
  }
  CHECK(power > 0);
  const auto manifest = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest.at("config_hash") == config_hash(c));
  CHECK(manifest.at("version") == version());
  for (const auto& f : manifest.at("files")) {
    const fs::path p = dir.path / f.at("name").get<std::string>();
    CHECK(f.at("sha256") == sha256_file(p));
    CHECK(f.at("bytes") == fs::file_size(p));
  }
  CHECK(!fs::exists(dir.path / ".lock"));
}

TEST_CASE("csbp-extinction run agrees with the exact law") {
  TempDir dir("lqg_cli_csbp");
  ExperimentConfig c;
  c.suite = "csbp-extinction";
  c.out = dir.path;
  c.params = {{"stable_levy", {{"y0", nlohmann::json::array({1.0})}, {"survival_t", nlohmann::json::array({1.0})}, {"n_paths", 20000}}}};
  std::ostringstream log;
  REQUIRE(run_suite(c, log) == kOk);
  const auto reports = nlohmann::json::parse(slurp(dir.path / "reports.json"));
  REQUIRE(reports.size() == 1);
  const auto r = report_from_json(reports[0]);
  const double exact = levy::csbp_survival_exact(1, 1, 1.5, 1);
  CHECK(r.params.at("exact").get<double>() == doctest::Approx(exact));
  CHECK(std::abs(r.estimate - exact) <= 3 * r.stderr_);
}

TEST_CASE("repeated runs give identical payloads") {
  TempDir a("lqg_cli_det_a"), b("lqg_cli_det_b");
  ExperimentConfig c;
  c.suite = "lbm-volume";
  c.params = {{"gmc_lbm", {{"n", 64}, {"n_coarse", 64}, {"volume_fields", 2}}}, {"save_samples", true}};
  std::ostringstream log;
  c.out = a.path;
  const int status = run_suite(c, log);
  INFO(log.str());
  REQUIRE(status != kError);
  c.out = b.path;
  REQUIRE(run_suite(c, log) != kError);
  for (const char* f : {"config.json", "reports.json", "lbm_volume.csv", "field_sample.bin"}) {
    CHECK(fs::exists(a.path / f));
    CHECK(slurp(a.path / f) == slurp(b.path / f));
  }
}

TEST_CASE("lock and failure cleanup") {
  TempDir dir("lqg_cli_lock");
  fs::create_directories(dir.path);
  ExperimentConfig c;
  c.suite = "phi-table";
  c.out = dir.path;
  std::ostringstream log;
  {
    OutputLock held(dir.path);
    CHECK_THROWS(OutputLock(dir.path));
    CHECK(run_suite(c, log) == kError);
    CHECK(log.str().find("locked") != std::string::npos);
  }
  CHECK(!fs::exists(dir.path / ".lock"));
  CHECK(fs::is_empty(dir.path));

  // A failing suite leaves no outputs and no manifest.
  c.params = {{"analytic_bounds", {{"grid_points", 1}}}};
  CHECK(run_suite(c, log) == kError);
  CHECK(fs::is_empty(dir.path));
}

TEST_CASE("array fields check their elements") {
  CHECK(error_of("{\"suite\": \"exact-law\", \"params\": {\"stable_levy\": {\"y0\": [1, \"2\"]}}}") ==
        "params.stable_levy.y0: expected an array, each element a number, got [1,\"2\"]");
  CHECK(error_of("{\"suite\": \"scale-functions\", \"params\": {\"analytic_bounds\": {\"cramer_n\": [50, -1]}}}") ==
        "params.analytic_bounds.cramer_n: expected an array, each element a non-negative integer, got [50,-1]");
}
