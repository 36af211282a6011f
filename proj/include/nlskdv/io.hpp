#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlskdv/evolve.hpp"
#include "nlskdv/grid.hpp"
#include "nlskdv/minimize.hpp"
#include "nlskdv/params.hpp"

namespace nlskdv::io {

namespace fs = std::filesystem;

/// Write through a sibling temporary and rename, so readers never see a torn file.
void atomic_write(const fs::path& path, const std::string& bytes);
std::string read_file(const fs::path& path);

/// Two-space indented, keys sorted, trailing newline. dump(load(x)) == x.
std::string dump_json(const nlohmann::json& j);
void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

/// <stem>.bin holds little-endian float64 samples (complex interleaved re, im);
/// <stem>.json holds {"L", "n", "kind": "real"|"complex"}.
void write_field(const fs::path& stem, const RealField& f);
void write_field(const fs::path& stem, const ComplexField& f);
RealField read_real_field(const fs::path& stem);
ComplexField read_complex_field(const fs::path& stem);
/// Header of a field file, for callers that need the grid before the data.
nlohmann::json read_field_header(const fs::path& stem);

nlohmann::json params_json(const PhysParams& prm);
PhysParams params_from_json(const nlohmann::json& j);
nlohmann::json grid_json(const Grid1D& g);

/// <stem>.json describing the pair plus <stem>_phi / <stem>_psi field files.
void save_pair(const fs::path& stem, const SolitaryWavePair& pair, const PhysParams& prm);
struct LoadedPair {
  SolitaryWavePair pair;
  PhysParams prm;
};
LoadedPair load_pair(const fs::path& json_path);

void save_w_solution(const fs::path& stem, const WSolution& w, const PhysParams& prm);

/// x, phi, psi columns for plotting.
void write_profile_csv(const fs::path& path, const SolitaryWavePair& pair);
/// time, E, G, H, distance (empty distance column without a reference).
void write_trace_csv(const fs::path& path, const EvolveTrace& trace);

struct SweepRow {
  double s = 0, t = 0, I = 0, sigma = 0, c = 0, res_phi = 0, res_psi = 0;
  int iterations = 0;
  std::string status;  // "ok" or the error text
};
void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace nlskdv::io
