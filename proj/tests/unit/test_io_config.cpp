#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "nlskdv/config.hpp"
#include "nlskdv/error.hpp"
#include "nlskdv/io.hpp"
#include "nlskdv/minimize.hpp"

using namespace nlskdv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nlskdv_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p) << s;
}

}  // namespace

TEST_CASE("fields round-trip bit for bit") {
  const auto dir = scratch("fields");
  const auto g = make_grid(12.5, 64);
  const auto f = sample(g, [](double x) { return std::exp(-x * x) / 3.0; });
  const auto c = sample_complex(g, [](double x) { return cdouble(std::sin(x), 1.0 / 7.0); });
  io::write_field(dir / "f", f);
  io::write_field(dir / "c", c);
  const auto f2 = io::read_real_field(dir / "f");
  const auto c2 = io::read_complex_field(dir / "c");
  CHECK(f2.values == f.values);
  CHECK(c2.values == c.values);
  CHECK(f2.grid->half_length() == 12.5);
  CHECK(f2.grid->size() == 64);
  CHECK_THROWS_AS(io::read_complex_field(dir / "f"), ValidationError);

  // truncate the payload
  fs::resize_file(dir / "f.bin", 100);
  CHECK_THROWS_AS(io::read_real_field(dir / "f"), IoError);
  CHECK_THROWS_AS(io::read_real_field(dir / "missing"), IoError);
  write_text(dir / "c.json", "{ not json");
  CHECK_THROWS_AS(io::read_complex_field(dir / "c"), IoError);
}

TEST_CASE("solve artifacts round-trip") {
  const auto dir = scratch("pair");
  const PhysParams prm(0.5, 1.0, 2.0, Rational::make(5, 3), 1.5);
  MinimizeOptions opts;
  opts.leak_threshold = 1e-4;  // only the file format matters here
  const auto [pair, rep] = minimize_I(1.0, 1.0, prm, make_grid(40, 256), opts);
  io::save_pair(dir / "pair", pair, prm);
  const auto text = io::read_file(dir / "pair.json");
  const auto loaded = io::load_pair(dir / "pair.json");
  CHECK(loaded.pair.phi.values == pair.phi.values);
  CHECK(loaded.pair.psi.values == pair.psi.values);
  CHECK(loaded.pair.sigma == pair.sigma);
  CHECK(loaded.pair.c == pair.c);
  CHECK(loaded.prm.p() == prm.p());
  CHECK(loaded.prm.q() == prm.q());
  // Writing the loaded pair reproduces the same bytes.
  const auto dir2 = scratch("pair_again");
  io::save_pair(dir2 / "pair", loaded.pair, loaded.prm);
  CHECK(io::read_file(dir2 / "pair.json") == text);
  CHECK(io::read_file(dir2 / "pair_phi.bin") == io::read_file(dir / "pair_phi.bin"));
  CHECK(io::read_file(dir2 / "pair_psi.bin") == io::read_file(dir / "pair_psi.bin"));
  CHECK(io::dump_json(io::read_json(dir / "pair.json")) == text);
}

TEST_CASE("json dumps are stable") {
  const nlohmann::json j = {{"b", 1.0 / 3.0}, {"a", {1, 2}}};
  const auto text = io::dump_json(j);
  CHECK(io::dump_json(nlohmann::json::parse(text)) == text);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
}

TEST_CASE("config from ini") {
  const auto dir = scratch("ini");
  write_text(dir / "ok.ini",
             "[physics]\nalpha = 0.5\np = 3/5\n[grid]\nn = 256\n"
             "[evolve]\nepsilons = 0.01, 0.02\n[verify]\nquadruples = 1 1 1 1; 0.5 0 0 0.5\n");
  const auto cfg = RunConfig::from_ini(dir / "ok.ini");
  CHECK(cfg.alpha == 0.5);
  CHECK(cfg.p == Rational{3, 5});
  CHECK(cfg.n == 256);
  CHECK(cfg.tau1 == 1.0);
  CHECK(cfg.epsilons == std::vector<double>{0.01, 0.02});
  REQUIRE(cfg.quadruples.size() == 2);
  CHECK(cfg.quadruples[1][3] == 0.5);
  CHECK(RunConfig::from_json(cfg.to_json()).to_json() == cfg.to_json());

  write_text(dir / "bad_key.ini", "[physics]\nbeta = 1\n");
  CHECK_THROWS_AS(RunConfig::from_ini(dir / "bad_key.ini"), ValidationError);
  write_text(dir / "bad_value.ini", "[grid]\nn = 12x\n");
  CHECK_THROWS_AS(RunConfig::from_ini(dir / "bad_value.ini"), ValidationError);
  write_text(dir / "even.ini", "[physics]\np = 1/2\n");
  CHECK_THROWS_AS(RunConfig::from_ini(dir / "even.ini"), ValidationError);
  CHECK_THROWS_AS(RunConfig::from_ini(dir / "absent.ini"), IoError);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n = 101;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = RunConfig{};
  cfg.L = -1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = RunConfig{};
  CHECK_THROWS_AS(cfg.set("grid", "nope", "1"), ValidationError);
}

TEST_CASE("output root from the environment") {
  RunConfig cfg;
  cfg.output_dir = "runs/a";
  ::setenv("NLSKDV_OUTPUT_ROOT", "/tmp/root", 1);
  CHECK(cfg.output_path() == fs::path("/tmp/root/runs/a"));
  cfg.output_dir = "/abs";
  CHECK(cfg.output_path() == fs::path("/abs"));
  ::unsetenv("NLSKDV_OUTPUT_ROOT");
  cfg.output_dir = "runs/a";
  CHECK(cfg.output_path() == fs::path("runs/a"));
}
