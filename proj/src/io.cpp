#include "nlskdv/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "nlskdv/error.hpp"

namespace nlskdv::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; add byte swapping for this target");

double number_or_nan(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

nlohmann::json nan_to_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

fs::path with_suffix(const fs::path& stem, const char* suffix) {
  return fs::path(stem.string() + suffix);
}

void write_binary(const fs::path& stem, const double* data, std::size_t count, int n, double L,
                  const char* kind) {
  std::string bytes(count * sizeof(double), '\0');
  std::memcpy(bytes.data(), data, bytes.size());
  atomic_write(with_suffix(stem, ".bin"), bytes);
  write_json(with_suffix(stem, ".json"), {{"L", L}, {"n", n}, {"kind", kind}});
}

std::vector<double> read_binary(const fs::path& stem, const char* kind, GridPtr& grid,
                                std::size_t per_sample) {
  const auto header = read_field_header(stem);
  try {
    if (header.at("kind").get<std::string>() != kind) {
      throw ValidationError("field " + stem.string() + " is " +
                            header.at("kind").get<std::string>() + ", expected " + kind);
    }
    grid = make_grid(header.at("L").get<double>(), header.at("n").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt field header " + stem.string() + ".json: " + e.what());
  }
  const auto bytes = read_file(with_suffix(stem, ".bin"));
  const std::size_t expect = grid->size() * per_sample * sizeof(double);
  if (bytes.size() != expect) {
    throw IoError("field " + stem.string() + ".bin has " + std::to_string(bytes.size()) +
                  " bytes, expected " + std::to_string(expect));
  }
  std::vector<double> out(grid->size() * per_sample);
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

template <class Row>
std::string csv_line(const Row& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + '\n';
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void atomic_write(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  thread_local std::mt19937_64 rng(std::random_device{}());
  const fs::path tmp = path.string() + ".tmp" + std::to_string(rng() % 1000000007ULL);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_json(const fs::path& path, const nlohmann::json& j) { atomic_write(path, dump_json(j)); }

nlohmann::json read_json(const fs::path& path) {
  const auto text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt JSON in " + path.string() + ": " + e.what());
  }
}

void write_field(const fs::path& stem, const RealField& f) {
  write_binary(stem, f.values.data(), f.values.size(), f.grid->size(), f.grid->half_length(),
               "real");
}

void write_field(const fs::path& stem, const ComplexField& f) {
  // std::complex<double> is layout-compatible with double[2].
  write_binary(stem, reinterpret_cast<const double*>(f.values.data()), 2 * f.values.size(),
               f.grid->size(), f.grid->half_length(), "complex");
}

nlohmann::json read_field_header(const fs::path& stem) { return read_json(with_suffix(stem, ".json")); }

RealField read_real_field(const fs::path& stem) {
  GridPtr grid;
  auto data = read_binary(stem, "real", grid, 1);
  RealField f(grid, std::move(data));
  require_finite(f, "field");
  return f;
}

ComplexField read_complex_field(const fs::path& stem) {
  GridPtr grid;
  const auto data = read_binary(stem, "complex", grid, 2);
  ComplexField f(grid);
  for (int j = 0; j < grid->size(); ++j) f[j] = cdouble(data[2 * j], data[2 * j + 1]);
  require_finite(f, "field");
  return f;
}

nlohmann::json params_json(const PhysParams& prm) {
  return {{"alpha", prm.alpha()},
          {"tau1", prm.tau1()},
          {"tau2", prm.tau2()},
          {"p", {{"num", prm.p().num}, {"den", prm.p().den}}},
          {"q", prm.q()},
          {"beta1", prm.beta1()},
          {"beta2", prm.beta2()}};
}

PhysParams params_from_json(const nlohmann::json& j) {
  try {
    const auto& p = j.at("p");
    return PhysParams(j.at("alpha").get<double>(), j.at("tau1").get<double>(),
                      j.at("tau2").get<double>(),
                      Rational::make(p.at("num").get<long>(), p.at("den").get<long>()),
                      j.at("q").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("corrupt parameter block: ") + e.what());
  }
}

nlohmann::json grid_json(const Grid1D& g) { return {{"L", g.half_length()}, {"n", g.size()}}; }

void save_pair(const fs::path& stem, const SolitaryWavePair& pair, const PhysParams& prm) {
  const std::string name = stem.filename().string();
  write_field(stem.string() + "_phi", pair.phi);
  write_field(stem.string() + "_psi", pair.psi);
  nlohmann::json j{{"kind", "solitary_wave_pair"},
                   {"grid", grid_json(*pair.phi.grid)},
                   {"params", params_json(prm)},
                   {"s", pair.s},
                   {"t", pair.t},
                   {"sigma", nan_to_null(pair.sigma)},
                   {"c", nan_to_null(pair.c)},
                   {"energy", pair.energy_value},
                   {"el_residual_phi", pair.el_residual_phi},
                   {"el_residual_psi", pair.el_residual_psi},
                   {"boundary_leak", pair.boundary_leak},
                   {"phi_positive", pair.phi_positive},
                   {"psi_positive", pair.psi_positive},
                   {"phi", name + "_phi"},
                   {"psi", name + "_psi"}};
  write_json(stem.string() + ".json", j);
}

LoadedPair load_pair(const fs::path& json_path) {
  const auto j = read_json(json_path);
  const fs::path dir = json_path.parent_path();
  try {
    if (j.at("kind").get<std::string>() != "solitary_wave_pair") {
      throw IoError(json_path.string() + " is not a solitary wave pair");
    }
    LoadedPair out{SolitaryWavePair{}, params_from_json(j.at("params"))};
    auto& p = out.pair;
    p.phi = read_complex_field(dir / j.at("phi").get<std::string>());
    p.psi = read_real_field(dir / j.at("psi").get<std::string>());
    if (!(*p.phi.grid == *p.psi.grid)) throw IoError("pair fields live on different grids");
    p.psi.grid = p.phi.grid;
    p.s = j.at("s").get<double>();
    p.t = j.at("t").get<double>();
    p.sigma = number_or_nan(j.at("sigma"));
    p.c = number_or_nan(j.at("c"));
    p.energy_value = j.at("energy").get<double>();
    p.el_residual_phi = j.at("el_residual_phi").get<double>();
    p.el_residual_psi = j.at("el_residual_psi").get<double>();
    p.boundary_leak = j.at("boundary_leak").get<double>();
    p.phi_positive = j.at("phi_positive").get<bool>();
    p.psi_positive = j.at("psi_positive").get<bool>();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt pair file " + json_path.string() + ": " + e.what());
  }
}

void save_w_solution(const fs::path& stem, const WSolution& w, const PhysParams& prm) {
  const std::string name = stem.filename().string();
  write_field(stem.string() + "_Phi", w.Phi);
  write_field(stem.string() + "_psi", w.psi);
  nlohmann::json scan = nlohmann::json::array();
  for (const auto& pt : w.scan) scan.push_back({pt.a, pt.value});
  nlohmann::json j{{"kind", "w_solution"},
                   {"grid", grid_json(*w.Phi.grid)},
                   {"params", params_json(prm)},
                   {"s", w.s},
                   {"t", w.t},
                   {"a_star", w.a_star},
                   {"b", w.b},
                   {"sigma", nan_to_null(w.sigma)},
                   {"omega", nan_to_null(w.omega)},
                   {"c", nan_to_null(w.c)},
                   {"c_consistency", nan_to_null(w.c_consistency)},
                   {"I_value", w.I_value},
                   {"W_value", w.W_value},
                   {"a_max", w.a_max},
                   {"boundary_minimum", w.boundary_minimum},
                   {"solves", w.solves},
                   {"scan", scan},
                   {"Phi", name + "_Phi"},
                   {"psi", name + "_psi"}};
  write_json(stem.string() + ".json", j);
}

void write_profile_csv(const fs::path& path, const SolitaryWavePair& pair) {
  std::string out = "x,phi_re,phi_im,psi\n";
  const auto& g = *pair.phi.grid;
  for (int j = 0; j < g.size(); ++j) {
    out += csv_line(std::vector<std::string>{format_double(g.x(j)), format_double(pair.phi[j].real()),
                                             format_double(pair.phi[j].imag()),
                                             format_double(pair.psi[j])});
  }
  atomic_write(path, out);
}

void write_trace_csv(const fs::path& path, const EvolveTrace& trace) {
  std::string out = "time,E,G,H,distance\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const auto& c = trace.conserved[i];
    out += csv_line(std::vector<std::string>{
        format_double(trace.times[i]), format_double(c.E), format_double(c.G), format_double(c.H),
        i < trace.distance.size() ? format_double(trace.distance[i]) : std::string()});
  }
  atomic_write(path, out);
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows) {
  std::string out = "s,t,I,sigma,c,res_phi,res_psi,iterations,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    for (auto& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out += csv_line(std::vector<std::string>{
        format_double(r.s), format_double(r.t), format_double(r.I), format_double(r.sigma),
        format_double(r.c), format_double(r.res_phi), format_double(r.res_psi),
        std::to_string(r.iterations), status});
  }
  atomic_write(path, out);
}

}  // namespace nlskdv::io
