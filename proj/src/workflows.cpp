#include "nlskdv/workflows.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "nlskdv/error.hpp"
#include "nlskdv/exact.hpp"
#include "nlskdv/functionals.hpp"
#include "nlskdv/io.hpp"
#include "nlskdv/minimize.hpp"
#include "nlskdv/pool.hpp"

namespace nlskdv::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kScheme = "integrating-factor RK4, 2/3-rule dealiasing";

int rank(const std::string& status) {
  if (status == "fail") return 3;
  if (status == "tolerance-limited") return 2;
  if (status == "skipped") return 1;
  return 0;
}

std::string worst(const std::string& a, const std::string& b) { return rank(a) >= rank(b) ? a : b; }

std::string status_of(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::tolerance_limited: return "tolerance-limited";
    case CheckStatus::fail: return "fail";
  }
  return "fail";
}

CheckRow bound_row(const std::string& suite, const std::string& name, double value, double bound,
                   bool ok, const std::string& detail = {}) {
  return {suite, name, ok ? "pass" : "fail", value, bound, detail};
}

/// Smooth random field: Gaussian spectral envelope of width k_width.
std::vector<cdouble> smooth_noise(const Grid1D& grid, std::mt19937_64& rng, double k_width,
                                  bool complex_valued) {
  std::normal_distribution<double> normal;
  const auto k = grid.wavenumbers();
  std::vector<cdouble> hat(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double env = std::exp(-k[j] * k[j] / (2.0 * k_width * k_width));
    hat[j] = env * cdouble(normal(rng), normal(rng));
  }
  std::vector<cdouble> out(grid.size());
  fft::inverse(hat, out);
  if (!complex_valued) {
    for (auto& z : out) z = z.real();
  }
  // Window so the direction vanishes at the box edge like the fields it perturbs.
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j) / (0.25 * grid.half_length());
    out[j] *= std::exp(-0.5 * x * x);
  }
  return out;
}

json manifest(const char* command, const RunConfig& cfg) {
  return {{"command", command}, {"config", cfg.to_json()}, {"version", kVersion}};
}

/// Map an exception to an exit code, write error.json and echo it.
int guarded(const RunConfig& cfg, const char* command, std::ostream& err,
            const std::function<int(const fs::path&)>& body) {
  json e{{"command", command}};
  int code = 0;
  try {
    cfg.validate();
    const fs::path out = cfg.output_path();
    return body(out);
  } catch (const UnattainedInfimum& ex) {
    code = ex.exit_code();
    e["kind"] = to_string(ex.kind());
    e["message"] = ex.what();
    e["infimum"] = ex.infimum();
  } catch (const Error& ex) {
    code = ex.exit_code();
    e["kind"] = to_string(ex.kind());
    e["message"] = ex.what();
  } catch (const fs::filesystem_error& ex) {
    code = static_cast<int>(ErrorKind::io);
    e["kind"] = to_string(ErrorKind::io);
    e["message"] = ex.what();
  } catch (const std::exception& ex) {
    code = static_cast<int>(ErrorKind::numerical);
    e["kind"] = to_string(ErrorKind::numerical);
    e["message"] = ex.what();
  }
  e["exit_code"] = code;
  err << e.dump() << "\n";
  try {
    io::write_json(cfg.output_path() / "error.json", e);
  } catch (const std::exception&) {
    // The output directory itself may be the problem; stderr already has the report.
  }
  return code;
}

json pair_summary(const SolitaryWavePair& p, const PhysParams& prm) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  const auto fp = fixed_point_defect(p, prm);
  return {{"s", p.s},
          {"t", p.t},
          {"I", p.energy_value},
          {"sigma", num(p.sigma)},
          {"c", num(p.c)},
          {"el_residual_phi", p.el_residual_phi},
          {"el_residual_psi", p.el_residual_psi},
          {"fixed_point_defect_phi", fp.phi},
          {"fixed_point_defect_psi", fp.psi},
          {"boundary_leak", p.boundary_leak},
          {"phi_positive", p.phi_positive},
          {"psi_positive", p.psi_positive}};
}

CheckRow positivity_row(const std::string& name, const RealField& f) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, std::abs(v));
  }
  // Exponentially small tails can round to zero or just below it.
  const std::string status = lo > 0.0 ? "pass" : lo >= -1e-12 * hi ? "tolerance-limited" : "fail";
  return {"minimizer", name, status, lo, 0.0, "minimum sample"};
}

}  // namespace

void to_json(json& j, const CheckRow& r) {
  j = json{{"suite", r.suite}, {"name", r.name}, {"status", r.status},
           {"value", std::isfinite(r.value) ? json(r.value) : json(nullptr)},
           {"bound", std::isfinite(r.bound) ? json(r.bound) : json(nullptr)}, {"detail", r.detail}};
}

bool failed(const std::vector<CheckRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.status == "fail"; });
}

std::string format_table(const std::vector<CheckRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(15) << "suite" << std::setw(34) << "check" << std::setw(19)
     << "status" << std::setw(14) << "value" << std::setw(14) << "bound"
     << "detail\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(15) << r.suite << std::setw(34) << r.name << std::setw(19)
       << r.status << std::setw(14) << std::setprecision(6) << r.value << std::setw(14) << r.bound
       << r.detail << "\n";
  }
  return os.str();
}

RealField random_bumps(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double L = grid->half_length();
  RealField f(grid);
  const int count = 1 + static_cast<int>(unit(rng) * 3.0) % 3;
  for (int b = 0; b < count; ++b) {
    const double amp = 0.2 + 1.8 * unit(rng);
    const double radius = 0.5 + (L / 4 - 0.5) * unit(rng);
    const double center = (unit(rng) - 0.5) * L;
    f = f + smooth_bump(grid, amp, radius, center);
  }
  return f;
}

std::vector<CheckRow> rearrangement_suite(const RunConfig& cfg, int pairs, int two_bump_cases) {
  const auto grid = cfg.grid();
  const auto prm = cfg.params();
  const std::string suite = "rearrangement";

  int multiset_bad = 0, lp_bad = 0;
  double hl_min = std::numeric_limits<double>::infinity(), mixed_min = hl_min;
  double ps_min = hl_min, ps_spec_min = hl_min, drop_min = hl_min;
  double ps_tol = 0.0, drop_tol = 0.0;
  std::string ps_status = "pass", ps_spec_status = "pass", drop_status = "pass";
  for (int i = 0; i < pairs; ++i) {
    const auto f = random_bumps(grid, cfg.seed * 7919 + 2 * i);
    const auto g = random_bumps(grid, cfg.seed * 7919 + 2 * i + 1);
    const auto rep = verify_rearrangement_inequalities(f, g);
    multiset_bad += rep.multiset_preserved ? 0 : 1;
    lp_bad += std::all_of(rep.lp_preserved.begin(), rep.lp_preserved.end(), [](bool b) { return b; })
                  ? 0
                  : 1;
    hl_min = std::min(hl_min, rep.hardy_littlewood_gap);
    mixed_min = std::min(mixed_min, rep.mixed_gap);
    if (rep.polya_szego_gap < ps_min) {
      ps_min = rep.polya_szego_gap;
      ps_tol = rep.tol_ps;
    }
    ps_status = worst(ps_status, status_of(rep.polya_szego_status));
    ps_spec_min = std::min(ps_spec_min, rep.polya_szego_gap_spectral);
    ps_spec_status = worst(ps_spec_status, status_of(rep.polya_szego_spectral_status));

    const auto drop = rearrangement_energy_drop(f, g, prm);
    const double tol = polya_szego_tolerance(*grid, drop.scale);
    if (drop.spectral < drop_min) {
      drop_min = drop.spectral;
      drop_tol = tol;
    }
    drop_status = worst(drop_status, status_of(classify_gap(drop.spectral, 1e-12 * drop.scale, tol)));
  }
  std::vector<CheckRow> rows;
  const std::string n_pairs = std::to_string(pairs) + " random pairs";
  rows.push_back(bound_row(suite, "multiset preserved", multiset_bad, 0, multiset_bad == 0, n_pairs));
  rows.push_back(bound_row(suite, "Lp norms preserved", lp_bad, 0, lp_bad == 0, n_pairs));
  rows.push_back(bound_row(suite, "Hardy-Littlewood gap >= 0", hl_min, 0, hl_min >= 0, n_pairs));
  rows.push_back(bound_row(suite, "mixed gap >= 0", mixed_min, 0, mixed_min >= 0, n_pairs));
  rows.push_back({suite, "Polya-Szego (differences)", ps_status, ps_min, -ps_tol, "min gap"});
  rows.push_back({suite, "Polya-Szego (spectral)", ps_spec_status, ps_spec_min, -ps_tol, "min gap"});
  rows.push_back({suite, "E(f*,g*) <= E(f,g) + tol", drop_status, drop_min, -drop_tol, "min drop"});

  std::mt19937_64 rng(cfg.seed * 104729 + 17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double L = grid->half_length(), dx = grid->dx();
  std::string g_status = "pass";
  double g_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < two_bump_cases; ++i) {
    const double r1 = 1.0 + (L / 8 - 1.0) * unit(rng), r2 = 1.0 + (L / 8 - 1.0) * unit(rng);
    const auto u = smooth_bump(grid, 0.3 + 1.7 * unit(rng), r1);
    const auto v = smooth_bump(grid, 0.3 + 1.7 * unit(rng), r2);
    const double separation = r1 + r2 + 2.0 * dx + 1.0 + (L / 4) * unit(rng);
    const auto rep = garrisi_check(u, v, separation);
    g_min = std::min(g_min, (rep.garrisi_rhs - rep.garrisi_lhs) / std::max(rep.tol_ps, 1e-300));
    g_status = worst(g_status, status_of(rep.garrisi_status));
  }
  rows.push_back({suite, "Garrisi two-bump drop", g_status, g_min, -1.0,
                  std::to_string(two_bump_cases) + " cases, min gap/tol_ps"});
  return rows;
}

std::vector<CheckRow> gradient_suite(const RunConfig& cfg, int directions) {
  const auto grid = cfg.grid();
  const auto prm = cfg.params();
  const auto phi = sample_complex(grid, [](double x) {
    return cdouble(std::cos(0.3 * x), std::sin(0.3 * x)) / std::cosh(x);
  });
  const auto psi = sample(grid, [](double x) { return 0.8 / std::pow(std::cosh(x / 1.5), 2); });
  const auto [g_phi, g_psi] = energy_gradient(phi, psi, prm);

  std::mt19937_64 rng(cfg.seed * 31337 + 5);
  const double eps = 1e-5;
  double worst_err = 0.0;
  for (int d = 0; d < directions; ++d) {
    const ComplexField h_phi(grid, smooth_noise(*grid, rng, 2.0, true));
    const RealField h_psi = ComplexField(grid, smooth_noise(*grid, rng, 2.0, false)).real();
    const double plus = energy(phi + cdouble(eps) * h_phi, psi + eps * h_psi, prm);
    const double minus = energy(phi - cdouble(eps) * h_phi, psi - eps * h_psi, prm);
    const double fd = (plus - minus) / (2 * eps);
    const double an = inner(g_phi, h_phi) + inner(g_psi, h_psi);
    worst_err = std::max(worst_err, std::abs(fd - an) / std::max(std::abs(an), 1e-300));
  }
  return {bound_row("gradient", "central differences, eps = 1e-5", worst_err, 1e-6, worst_err <= 1e-6,
                    std::to_string(directions) + " random directions, max relative error")};
}

std::vector<CheckRow> minimizer_suite(const RunConfig& cfg) {
  const std::string suite = "minimizer";
  const auto prm = cfg.params();
  std::vector<CheckRow> rows;
  SolitaryWavePair pair;
  try {
    pair = minimize_I(cfg.s, cfg.t, prm, cfg.grid(), cfg.solver()).first;
  } catch (const UnattainedInfimum& e) {
    rows.push_back({suite, "minimize_I", "skipped", e.infimum(), 0, e.what()});
    return rows;
  } catch (const Error& e) {
    rows.push_back({suite, "minimize_I", "fail", NAN, NAN, e.what()});
    return rows;
  }
  rows.push_back(bound_row(suite, "EL residual phi", pair.el_residual_phi, cfg.tol,
                           pair.el_residual_phi <= cfg.tol));
  rows.push_back(bound_row(suite, "EL residual psi", pair.el_residual_psi, cfg.tol,
                           pair.el_residual_psi <= cfg.tol));
  const auto fp = fixed_point_defect(pair, prm);
  rows.push_back(bound_row(suite, "fixed-point defect", std::max(fp.phi, fp.psi), cfg.tol,
                           std::max(fp.phi, fp.psi) <= cfg.tol));
  rows.push_back(bound_row(suite, "I(s,t) < 0", pair.energy_value, 0, pair.energy_value < 0));
  rows.push_back(bound_row(suite, "boundary leak", pair.boundary_leak, cfg.leak_threshold,
                           pair.boundary_leak <= cfg.leak_threshold));
  if (cfg.s > 0 && cfg.t > 0) {
    const double m = mixed_action(pair, prm);
    rows.push_back(bound_row(suite, "mixed action < 0", m, 0, m < 0));
    if (prm.alpha() > 0) {
      rows.push_back(bound_row(suite, "sigma > 0", pair.sigma, 0, pair.sigma > 0));
      rows.push_back(positivity_row("phi > 0", pair.phi.real()));
      rows.push_back(positivity_row("psi > 0", pair.psi));
    }
  }
  return rows;
}

std::vector<CheckRow> subadditivity_suite(const RunConfig& cfg) {
  const auto prm = cfg.params();
  const auto grid = cfg.grid();
  const auto opts = cfg.solver();
  const auto& qs = cfg.quadruples;
  auto outcomes = parallel_map<SubadditivityResult>(qs.size(), cfg.worker_count(), [&](std::size_t i) {
    const auto& q = qs[i];
    return subadditivity_probe(q[0], q[1], q[2], q[3], prm, grid, opts);
  });
  std::vector<CheckRow> rows;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    std::ostringstream name;
    name << "(" << qs[i][0] << "," << qs[i][1] << ")+(" << qs[i][2] << "," << qs[i][3] << ")";
    try {
      const auto& r = outcomes[i].get();
      std::ostringstream detail;
      detail << std::setprecision(10) << "I12=" << r.I12 << " I1=" << r.I1 << " I2=" << r.I2
             << " L=" << r.L;
      rows.push_back(bound_row("subadditivity", name.str(), r.margin, 0, r.margin > 0, detail.str()));
    } catch (const ValidationError& e) {
      rows.push_back({"subadditivity", name.str(), "skipped", NAN, NAN, e.what()});
    } catch (const std::exception& e) {
      rows.push_back({"subadditivity", name.str(), "fail", NAN, NAN, e.what()});
    }
  }
  return rows;
}

InitialWave load_initial_wave(const fs::path& json_path) {
  const auto j = io::read_json(json_path);
  std::string kind;
  try {
    kind = j.at("kind").get<std::string>();
  } catch (const json::exception& e) {
    throw IoError("corrupt artifact " + json_path.string() + ": " + e.what());
  }
  if (kind == "solitary_wave_pair") {
    const auto loaded = io::load_pair(json_path);
    return {solitary_initial(loaded.pair, loaded.prm), ReferenceOrbit(loaded.pair), kind};
  }
  if (kind == "w_solution") {
    const fs::path dir = json_path.parent_path();
    try {
      const auto prm = io::params_from_json(j.at("params"));
      auto Phi = io::read_complex_field(dir / j.at("Phi").get<std::string>());
      auto psi = io::read_real_field(dir / j.at("psi").get<std::string>());
      if (!(*Phi.grid == *psi.grid)) throw IoError("W solution fields live on different grids");
      psi.grid = Phi.grid;
      ReferenceOrbit ref(Phi, psi);
      return {EvolveState{std::move(Phi), std::move(psi), 0.0, prm}, std::move(ref), kind};
    } catch (const json::exception& e) {
      throw IoError("corrupt artifact " + json_path.string() + ": " + e.what());
    }
  }
  throw IoError(json_path.string() + ": unknown artifact kind '" + kind + "'");
}

int cmd_solve(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(cfg, "solve", err, [&](const fs::path& out) {
    const auto prm = cfg.params();
    const auto t0 = std::chrono::steady_clock::now();
    const auto [pair, report] = minimize_I(cfg.s, cfg.t, prm, cfg.grid(), cfg.solver());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::save_pair(out / "pair", pair, prm);
    io::write_json(out / "report.json", report);
    io::write_profile_csv(out / "profile.csv", pair);
    auto m = manifest("solve", cfg);
    m["result"] = pair_summary(pair, prm);
    m["iterations"] = report.iterations;
    m["artifacts"] = {"pair.json", "pair_phi.bin", "pair_psi.bin", "report.json", "profile.csv"};
    io::write_json(out / "manifest.json", m);
    log << std::setprecision(12) << "I(" << cfg.s << ", " << cfg.t << ") = " << pair.energy_value
        << "  sigma = " << pair.sigma << "  c = " << pair.c << "\n"
        << "EL residuals " << pair.el_residual_phi << ", " << pair.el_residual_psi << " after "
        << report.iterations << " iterations (" << std::setprecision(3) << secs << " s)\n"
        << "wrote " << out.string() << "\n";
    return 0;
  });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(cfg, "sweep", err, [&](const fs::path& out) {
    const auto prm = cfg.params();
    const auto grid = cfg.grid();
    const auto opts = cfg.solver();
    auto lin = [](double a, double b, int n, int i) { return n == 1 ? a : a + (b - a) * i / (n - 1); };
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < cfg.s_count; ++i) {
      for (int k = 0; k < cfg.t_count; ++k) {
        points.emplace_back(lin(cfg.s_min, cfg.s_max, cfg.s_count, i),
                            lin(cfg.t_min, cfg.t_max, cfg.t_count, k));
      }
    }
    auto outcomes = parallel_map<std::pair<SolitaryWavePair, MinimizeReport>>(
        points.size(), cfg.worker_count(),
        [&](std::size_t i) { return minimize_I(points[i].first, points[i].second, prm, grid, opts); });

    std::vector<io::SweepRow> rows;
    int code = 0;
    json jrows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      io::SweepRow r;
      r.s = points[i].first;
      r.t = points[i].second;
      try {
        const auto& [pair, rep] = outcomes[i].get();
        r.I = pair.energy_value;
        r.sigma = pair.sigma;
        r.c = pair.c;
        r.res_phi = pair.el_residual_phi;
        r.res_psi = pair.el_residual_psi;
        r.iterations = rep.iterations;
        r.status = "ok";
      } catch (const Error& e) {
        r.I = r.sigma = r.c = r.res_phi = r.res_psi = NAN;
        r.status = e.what();
        code = std::max(code, e.exit_code());
      } catch (const std::exception& e) {
        r.I = r.sigma = r.c = r.res_phi = r.res_psi = NAN;
        r.status = e.what();
        code = std::max(code, static_cast<int>(ErrorKind::numerical));
      }
      rows.push_back(r);
      auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
      jrows.push_back({{"s", r.s}, {"t", r.t}, {"I", num(r.I)}, {"sigma", num(r.sigma)},
                       {"c", num(r.c)}, {"iterations", r.iterations}, {"status", r.status}});
    }
    io::write_sweep_csv(out / "sweep.csv", rows);
    auto m = manifest("sweep", cfg);
    m["rows"] = jrows;
    m["artifacts"] = {"sweep.csv"};
    io::write_json(out / "manifest.json", m);
    const auto bad = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.status != "ok"; });
    log << points.size() << " points, " << bad << " failed; wrote " << (out / "sweep.csv").string() << "\n";
    return code;
  });
}

int cmd_w_solve(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(cfg, "w-solve", err, [&](const fs::path& out) {
    const auto prm = cfg.params();
    const auto w = minimize_W(cfg.s, cfg.t, prm, cfg.grid(), cfg.solver());
    io::save_w_solution(out / "w", w, prm);
    SolitaryWavePair view;
    view.phi = w.Phi;
    view.psi = w.psi;
    io::write_profile_csv(out / "profile.csv", view);
    const double E = energy(w.Phi, w.psi, prm);
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    auto m = manifest("w-solve", cfg);
    m["result"] = {{"W", w.W_value},
                   {"a_star", w.a_star},
                   {"b", w.b},
                   {"sigma", num(w.sigma)},
                   {"omega", num(w.omega)},
                   {"c", num(w.c)},
                   {"E", E},
                   {"H", charge(w.Phi)},
                   {"G", momentum(w.Phi, w.psi)},
                   {"consistency", E - w.W_value},
                   {"boundary_minimum", w.boundary_minimum},
                   {"solves", w.solves}};
    m["artifacts"] = {"w.json", "w_Phi.bin", "w_psi.bin", "profile.csv"};
    io::write_json(out / "manifest.json", m);
    log << std::setprecision(12) << "W(" << cfg.s << ", " << cfg.t << ") = " << w.W_value
        << "  a* = " << w.a_star << "  b = " << w.b << "  omega = " << w.omega << "  c = " << w.c
        << "\n" << "wrote " << out.string() << "\n";
    return 0;
  });
}

int cmd_evolve(const RunConfig& cfg, const fs::path& init_path, std::ostream& log, std::ostream& err) {
  return guarded(cfg, "evolve", err, [&](const fs::path& out) {
    if (!fs::exists(init_path)) throw IoError("initial artifact not found: " + init_path.string());
    const auto init = load_initial_wave(init_path);
    const double y0 = y_norm(init.state.u, init.state.v);

    struct Run {
      EvolveTrace trace;
      double eps_abs = 0.0;
    };
    auto outcomes = parallel_map<Run>(cfg.epsilons.size(), cfg.worker_count(), [&](std::size_t i) {
      Run r;
      r.eps_abs = cfg.epsilons[i] * y0;
      const auto start = r.eps_abs > 0 ? perturb(init.state, r.eps_abs, cfg.seed + i, cfg.k_width)
                                       : init.state;
      r.trace = evolve(start, cfg.T, cfg.dt, cfg.sample_every, &init.reference);
      return r;
    });

    auto m = manifest("evolve", cfg);
    m["init"] = init_path.string();
    m["init_kind"] = init.kind;
    m["params"] = io::params_json(init.state.prm);
    m["grid"] = io::grid_json(*init.state.u.grid);
    m["scheme"] = kScheme;
    m["reference_y_norm"] = y0;
    m["outside_theorem"] = !init.state.prm.within_stability_range();
    json runs = json::array();
    int code = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& tr = outcomes[i].get().trace;  // validation errors propagate
      const std::string csv = "trace_" + std::to_string(i) + ".csv";
      io::write_trace_csv(out / csv, tr);
      runs.push_back({{"epsilon", cfg.epsilons[i]},
                      {"epsilon_abs", outcomes[i].get().eps_abs},
                      {"seed", cfg.seed + i},
                      {"initial_distance", tr.distance.front()},
                      {"max_distance", tr.max_distance()},
                      {"drift", {{"H", tr.drift.H}, {"G", tr.drift.G}, {"E", tr.drift.E}}},
                      {"steps", tr.steps},
                      {"final_time", tr.times.back()},
                      {"status", tr.status},
                      {"message", tr.message},
                      {"csv", csv}});
      if (tr.status != "ok") code = static_cast<int>(ErrorKind::numerical);
      log << std::setprecision(6) << "eps = " << cfg.epsilons[i] << ": max distance "
          << tr.max_distance() << ", drift H " << tr.drift.H << " G " << tr.drift.G << " E "
          << tr.drift.E << " [" << tr.status << "]\n";
    }
    m["runs"] = runs;
    io::write_json(out / "manifest.json", m);
    if (code != 0) {
      err << json{{"command", "evolve"}, {"kind", "numerical"}, {"message", "blow-up; partial traces written"},
                  {"exit_code", code}}.dump()
          << "\n";
    }
    log << "wrote " << out.string() << "\n";
    return code;
  });
}

int cmd_rearrange(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(cfg, "rearrange", err, [&](const fs::path& out) {
    const auto rows = rearrangement_suite(cfg, 100, 20);
    auto m = manifest("rearrange", cfg);
    m["checks"] = rows;
    m["passed"] = !failed(rows);
    io::write_json(out / "manifest.json", m);
    log << format_table(rows);
    return failed(rows) ? static_cast<int>(ErrorKind::numerical) : 0;
  });
}

int cmd_verify(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(cfg, "verify", err, [&](const fs::path& out) {
    std::vector<CheckRow> rows;
    for (auto&& part : {rearrangement_suite(cfg, 100, 10), gradient_suite(cfg, 10), minimizer_suite(cfg),
                        subadditivity_suite(cfg)}) {
      rows.insert(rows.end(), part.begin(), part.end());
    }
    const std::string table = format_table(rows);
    json failures = json::array();
    for (const auto& r : rows) {
      if (r.status == "fail") failures.push_back(r.suite + ": " + r.name);
    }
    auto m = manifest("verify", cfg);
    m["checks"] = rows;
    m["passed"] = failures.empty();
    m["failures"] = failures;
    io::write_json(out / "manifest.json", m);
    io::atomic_write(out / "verify.txt", table);
    log << table;
    if (!failures.empty()) {
      err << json{{"command", "verify"}, {"kind", "numerical"}, {"failures", failures},
                  {"exit_code", static_cast<int>(ErrorKind::numerical)}}.dump()
          << "\n";
      return static_cast<int>(ErrorKind::numerical);
    }
    return 0;
  });
}

}  // namespace nlskdv::cli
