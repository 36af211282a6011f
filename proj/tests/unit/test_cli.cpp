#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "nlskdv/io.hpp"
#include "nlskdv/workflows.hpp"

using namespace nlskdv;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const std::string& name) {
  RunConfig cfg;
  cfg.n = 512;
  cfg.output_dir = (fs::temp_directory_path() / ("nlskdv_cli_" + name)).string();
  fs::remove_all(cfg.output_dir);
  return cfg;
}

const cli::CheckRow* find_row(const std::vector<cli::CheckRow>& rows, const std::string& part) {
  for (const auto& r : rows)
    if (r.name.find(part) != std::string::npos) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("solve then evolve on the solitary orbit") {
  auto cfg = small_config("solve");
  std::ostringstream log, err;
  REQUIRE(cli::cmd_solve(cfg, log, err) == 0);
  const fs::path out = cfg.output_dir;
  CHECK(fs::exists(out / "pair.json"));
  CHECK(fs::exists(out / "profile.csv"));
  const auto manifest = io::read_json(out / "manifest.json");
  CHECK(manifest["command"] == "solve");
  CHECK(manifest["config"]["grid"]["n"] == 512);
  CHECK(io::dump_json(manifest) == io::read_file(out / "manifest.json"));
  // The manifest alone reproduces the run's config.
  CHECK(RunConfig::from_json(manifest["config"]).to_json() == manifest["config"]);

  auto ecfg = small_config("evolve");
  ecfg.T = 1.0;
  ecfg.epsilons = {0.0};
  REQUIRE(cli::cmd_evolve(ecfg, out / "pair.json", log, err) == 0);
  const auto em = io::read_json(fs::path(ecfg.output_dir) / "manifest.json");
  CHECK(em["runs"][0]["max_distance"].get<double>() <= 1e-6);
  CHECK(fs::exists(fs::path(ecfg.output_dir) / "trace_0.csv"));
  CHECK(io::dump_json(em) == io::read_file(fs::path(ecfg.output_dir) / "manifest.json"));
  CHECK(em.contains("scheme"));
}

TEST_CASE("exit codes") {
  std::ostringstream log, err;
  auto cfg = small_config("codes");
  cfg.tau1 = 0.0;
  cfg.t = 0.0;
  CHECK(cli::cmd_solve(cfg, log, err) == 2);
  CHECK(fs::exists(fs::path(cfg.output_dir) / "error.json"));
  CHECK(err.str().find("infimum") != std::string::npos);

  auto bad = small_config("bad");
  bad.n = 7;
  CHECK(cli::cmd_solve(bad, log, err) == 2);

  auto missing = small_config("missing");
  CHECK(cli::cmd_evolve(missing, "/nonexistent/pair.json", log, err) == 3);

  auto coarse = small_config("coarse");
  coarse.max_iter = 5;
  CHECK(cli::cmd_solve(coarse, log, err) == 4);
}

TEST_CASE("sweep rows are negative") {
  auto cfg = small_config("sweep");
  cfg.s_min = 1.0;
  cfg.s_count = 2;
  cfg.t_count = 1;
  cfg.t_min = cfg.t_max = 1.0;
  std::ostringstream log, err;
  REQUIRE(cli::cmd_sweep(cfg, log, err) == 0);
  const auto m = io::read_json(fs::path(cfg.output_dir) / "manifest.json");
  REQUIRE(m["rows"].size() == 2);
  for (const auto& r : m["rows"]) CHECK(r["I"].get<double>() < 0);
}

TEST_CASE("coarse rearrangement checks are tolerance-limited, not failed") {
  RunConfig cfg;
  cfg.n = 64;
  const auto rows = cli::rearrangement_suite(cfg, 100, 10);
  const auto* ps = find_row(rows, "spectral");
  REQUIRE(ps != nullptr);
  CHECK(ps->status == "tolerance-limited");
  for (const auto& r : rows) CHECK_MESSAGE(r.status != "fail", r.name);
}

TEST_CASE("gradient suite passes") {
  RunConfig cfg;
  cfg.n = 512;
  const auto rows = cli::gradient_suite(cfg, 5);
  CHECK_FALSE(cli::failed(rows));
}
