#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nlskdv/config.hpp"
#include "nlskdv/error.hpp"
#include "nlskdv/workflows.hpp"

namespace {

// flag name -> config "section.key"
const std::map<std::string, std::string> kFlags = {
    {"alpha", "physics.alpha"},        {"tau1", "physics.tau1"},
    {"tau2", "physics.tau2"},          {"p", "physics.p"},
    {"q", "physics.q"},                {"L", "grid.L"},
    {"n", "grid.n"},                   {"tol", "solver.tol"},
    {"max-iter", "solver.max_iter"},   {"continuation-step", "solver.continuation_step"},
    {"stage-tol", "solver.stage_tol"}, {"leak-threshold", "solver.leak_threshold"},
    {"s", "problem.s"},                {"t", "problem.t"},
    {"s-min", "sweep.s_min"},          {"s-max", "sweep.s_max"},
    {"s-count", "sweep.s_count"},      {"t-min", "sweep.t_min"},
    {"t-max", "sweep.t_max"},          {"t-count", "sweep.t_count"},
    {"dt", "evolve.dt"},               {"T", "evolve.T"},
    {"seed", "evolve.seed"},           {"epsilons", "evolve.epsilons"},
    {"sample-every", "evolve.sample_every"}, {"k-width", "evolve.k_width"},
    {"quadruples", "verify.quadruples"},     {"output-dir", "run.output_dir"},
    {"workers", "run.workers"},
};

int fail(const std::string& command, const nlskdv::Error& e) {
  std::cerr << nlohmann::json{{"command", command},
                              {"kind", nlskdv::to_string(e.kind())},
                              {"message", e.what()},
                              {"exit_code", e.exit_code()}}
                   .dump()
            << "\n";
  return e.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solitary waves of the coupled NLS-KdV system: solve, sweep, evolve, verify"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "INI config file ([physics], [grid], [solver], ...)");
  std::map<std::string, std::string> values;
  for (const auto& [flag, key] : kFlags) {
    app.add_option("--" + flag, values[flag], "overrides [" + key.substr(0, key.find('.')) + "] " +
                                                  key.substr(key.find('.') + 1));
  }
  std::vector<std::string> sets;
  app.add_option("--set", sets, "extra section.key=value assignments");

  std::string init_path;
  auto* solve = app.add_subcommand("solve", "minimize I(s,t); writes the pair, report and profile");
  auto* sweep = app.add_subcommand("sweep", "minimize I over an (s,t) lattice in parallel");
  auto* wsolve = app.add_subcommand("w-solve", "minimize W(s,t) through the reduction to I(s,a)");
  auto* evolve = app.add_subcommand("evolve", "evolve a stored wave, optionally perturbed");
  evolve->add_option("--init", init_path, "pair.json or w.json written by solve / w-solve")->required();
  auto* rearrange = app.add_subcommand("rearrange", "rearrangement inequality suite");
  auto* verify = app.add_subcommand("verify", "all invariant suites as a pass/fail table");
  for (auto* sub : {solve, sweep, wsolve, evolve, rearrange, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("parse", nlskdv::ValidationError(e.what()));
  }

  const std::string command = app.get_subcommands().front()->get_name();
  nlskdv::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = nlskdv::RunConfig::from_ini(config_path);
    for (const auto& [flag, key] : kFlags) {
      if (app.count("--" + flag) == 0) continue;
      const auto dot = key.find('.');
      cfg.set(key.substr(0, dot), key.substr(dot + 1), values[flag]);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('='), dot = s.find('.');
      if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw nlskdv::ValidationError("--set expects section.key=value, got '" + s + "'");
      }
      cfg.set(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
    }
  } catch (const nlskdv::Error& e) {
    return fail(command, e);
  }

  using namespace nlskdv::cli;
  if (command == "solve") return cmd_solve(cfg, std::cout, std::cerr);
  if (command == "sweep") return cmd_sweep(cfg, std::cout, std::cerr);
  if (command == "w-solve") return cmd_w_solve(cfg, std::cout, std::cerr);
  if (command == "evolve") return cmd_evolve(cfg, init_path, std::cout, std::cerr);
  if (command == "rearrange") return cmd_rearrange(cfg, std::cout, std::cerr);
  return cmd_verify(cfg, std::cout, std::cerr);
}
