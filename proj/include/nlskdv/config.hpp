#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlskdv/grid.hpp"
#include "nlskdv/minimize.hpp"
#include "nlskdv/params.hpp"

namespace nlskdv {

/// Everything a run needs. Read from an INI-style file
///
///   [physics] alpha tau1 tau2 p q
///   [grid]    L n
///   [solver]  tol max_iter continuation_step stage_tol leak_threshold
///   [problem] s t
///   [sweep]   s_min s_max s_count t_min t_max t_count
///   [evolve]  dt T seed epsilons sample_every k_width
///   [verify]  quadruples   (s1 t1 s2 t2; s1 t1 s2 t2; ...)
///   [run]     output_dir workers
///
/// with unknown keys rejected, then overridden by command-line flags. The full
/// resolved config goes into every run manifest.
struct RunConfig {
  double alpha = 1.0;
  double tau1 = 1.0;
  double tau2 = 1.0;
  Rational p{1, 1};
  double q = 1.0;

  double L = 40.0;
  int n = 1024;

  double tol = 1e-8;
  int max_iter = 200000;
  double continuation_step = 0.25;
  double stage_tol = 1e-6;
  double leak_threshold = 1e-8;

  double s = 1.0;
  double t = 1.0;

  double s_min = 0.5, s_max = 2.0;
  int s_count = 4;
  double t_min = 0.5, t_max = 2.0;
  int t_count = 4;

  double dt = 1e-3;
  double T = 20.0;
  std::uint64_t seed = 1;
  std::vector<double> epsilons{0.0};  // relative to the Y-norm of the initial wave
  int sample_every = 100;
  double k_width = 2.0;

  std::vector<std::array<double, 4>> quadruples{{0.5, 0.5, 0.5, 0.5}, {1.0, 0.5, 0.5, 1.0}};

  std::string output_dir = "out";
  int workers = 0;  // 0: one per hardware thread

  PhysParams params() const;
  GridPtr grid() const;
  MinimizeOptions solver() const;
  int worker_count() const;
  /// output_dir, resolved against $NLSKDV_OUTPUT_ROOT when relative and the variable is set.
  std::filesystem::path output_path() const;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  /// Start from the defaults and apply every key in the file.
  static RunConfig from_ini(const std::filesystem::path& path);
  /// Apply one section.key = value assignment (used for files and --set).
  void set(const std::string& section, const std::string& key, const std::string& value);
};

}  // namespace nlskdv
