#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlskdv/config.hpp"
#include "nlskdv/evolve.hpp"
#include "nlskdv/rearrange.hpp"

namespace nlskdv::cli {

/// One line of a verification table.
struct CheckRow {
  std::string suite;
  std::string name;
  std::string status;  // "pass", "tolerance-limited", "skipped" or "fail"
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

void to_json(nlohmann::json& j, const CheckRow& r);
bool failed(const std::vector<CheckRow>& rows);
std::string format_table(const std::vector<CheckRow>& rows);

/// Random non-negative field: one to three smooth bumps inside the middle half of the box.
RealField random_bumps(const GridPtr& grid, std::uint64_t seed);

/// Multiset, Lp, Hardy-Littlewood, mixed and Polya-Szego checks on `pairs`
/// random pairs, Garrisi on `two_bump_cases` separated bumps, and the energy
/// drop E(f,g) - E(f*,g*) >= -tol_ps.
std::vector<CheckRow> rearrangement_suite(const RunConfig& cfg, int pairs, int two_bump_cases);

/// Relative error of energy_gradient against central differences in random directions.
std::vector<CheckRow> gradient_suite(const RunConfig& cfg, int directions);

/// Residual, multiplier sign, negativity and decay checks on the I(s,t) minimizer of cfg.
std::vector<CheckRow> minimizer_suite(const RunConfig& cfg);

/// Margins for cfg.quadruples; quadruples violating the preconditions are skipped with the reason.
std::vector<CheckRow> subadditivity_suite(const RunConfig& cfg);

/// The initial condition stored in a solve or w-solve artifact, plus its orbit.
struct InitialWave {
  EvolveState state;
  ReferenceOrbit reference;
  std::string kind;
};
InitialWave load_initial_wave(const std::filesystem::path& json_path);

/// Subcommands. Each writes its artifacts and a manifest.json (with the fully
/// resolved config) under cfg.output_path(), and returns the exit code:
/// 0 success, 2 validation, 3 I/O, 4 numerical failure. On failure an
/// error.json is written next to the artifacts and echoed to `err`.
int cmd_solve(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_w_solve(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_evolve(const RunConfig& cfg, const std::filesystem::path& init_path, std::ostream& log,
               std::ostream& err);
int cmd_rearrange(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace nlskdv::cli
