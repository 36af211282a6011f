#include "nlskdv/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>

#include "nlskdv/error.hpp"
#include "nlskdv/functionals.hpp"

namespace nlskdv {

namespace {

constexpr double kPolyaSzegoConstant = 1.0;
constexpr double kRoundoff = 1e-12;

int wrap(int j, int n) { return ((j % n) + n) % n; }

void require_nonnegative(const RealField& w, const char* name) {
  for (double v : w.values) {
    if (!(v >= 0.0)) throw ValidationError(std::string(name) + " must be non-negative");
  }
}

long double power_sum(std::span<const double> v, double p) {
  long double acc = 0.0L;
  for (double x : v) acc += std::pow(std::abs(x), p);
  return acc;
}

}  // namespace

std::vector<double> rearrange_values(std::span<const double> values, int center) {
  const int n = static_cast<int>(values.size());
  std::vector<double> sorted(values.begin(), values.end());
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> out(n, 0.0);
  for (int r = 0; r < n; ++r) {
    // r = 0 -> 0, 1 -> +1, 2 -> -1, 3 -> +2, 4 -> -2, ...
    const int offset = (r % 2 == 1) ? (r + 1) / 2 : -(r / 2);
    out[wrap(center + offset, n)] = sorted[r];
  }
  return out;
}

RealField decreasing_rearrangement(const RealField& w) {
  require_nonnegative(w, "rearrangement input");
  return RealField(w.grid, rearrange_values(w.values, w.grid->center_index()));
}

double fd_kinetic(const RealField& f) {
  const int n = f.size();
  long double acc = 0.0L;
  for (int j = 0; j < n; ++j) {
    const double d = f[wrap(j + 1, n)] - f[j];
    acc += d * d;
  }
  return static_cast<double>(acc) / f.grid->dx();
}

double spectral_kinetic(const RealField& f) { return norm_sq(deriv(f, 1)); }

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::tolerance_limited: return "tolerance-limited";
    case CheckStatus::fail: return "fail";
  }
  return "unknown";
}

CheckStatus classify_gap(double gap, double roundoff, double tol) {
  if (gap >= -roundoff) return CheckStatus::pass;
  if (gap >= -tol) return CheckStatus::tolerance_limited;
  return CheckStatus::fail;
}

bool RearrangeReport::passed() const {
  const bool lp = std::all_of(lp_preserved.begin(), lp_preserved.end(), [](bool b) { return b; });
  return lp && multiset_preserved && hardy_littlewood_gap >= 0.0 && mixed_gap >= 0.0 &&
         polya_szego_status != CheckStatus::fail &&
         polya_szego_spectral_status != CheckStatus::fail && garrisi_status != CheckStatus::fail;
}

void to_json(nlohmann::json& j, const RearrangeReport& r) {
  j = nlohmann::json{
      {"lp_exponents", r.lp_exponents},
      {"lp_preserved", r.lp_preserved},
      {"multiset_preserved", r.multiset_preserved},
      {"hardy_littlewood_gap", r.hardy_littlewood_gap},
      {"mixed_gap", r.mixed_gap},
      {"polya_szego_gap", r.polya_szego_gap},
      {"polya_szego_gap_spectral", r.polya_szego_gap_spectral},
      {"tol_ps", r.tol_ps},
      {"polya_szego_status", to_string(r.polya_szego_status)},
      {"polya_szego_spectral_status", to_string(r.polya_szego_spectral_status)},
      {"garrisi_lhs", r.garrisi_lhs},
      {"garrisi_rhs", r.garrisi_rhs},
      {"garrisi_status", to_string(r.garrisi_status)},
      {"passed", r.passed()},
  };
}

double polya_szego_tolerance(const Grid1D& grid, double scale) {
  return kPolyaSzegoConstant * grid.dx() * std::max(scale, std::numeric_limits<double>::min());
}

RearrangeReport verify_rearrangement_inequalities(const RealField& f, const RealField& g) {
  require_same_grid(f.grid, g.grid);
  require_nonnegative(f, "f");
  require_nonnegative(g, "g");
  const auto fs = decreasing_rearrangement(f);
  const auto gs = decreasing_rearrangement(g);

  RearrangeReport rep;
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  rep.multiset_preserved = sorted(f.values) == sorted(fs.values) && sorted(g.values) == sorted(gs.values);
  rep.lp_exponents = {1.0, 2.0, 2.5, 3.0, 4.0, 6.0};
  for (double p : rep.lp_exponents) {
    auto same = [&](const RealField& a, const RealField& b) {
      const long double x = power_sum(a.values, p), y = power_sum(b.values, p);
      return std::abs(x - y) <= 64.0L * std::numeric_limits<double>::epsilon() * std::abs(x);
    };
    rep.lp_preserved.push_back(rep.multiset_preserved && same(f, fs) && same(g, gs));
  }

  long double hl_star = 0, hl = 0, mx_star = 0, mx = 0;
  for (int j = 0; j < f.size(); ++j) {
    hl_star += static_cast<long double>(fs[j]) * gs[j];
    hl += static_cast<long double>(f[j]) * g[j];
    mx_star += static_cast<long double>(fs[j]) * fs[j] * gs[j];
    mx += static_cast<long double>(f[j]) * f[j] * g[j];
  }
  const double dx = f.grid->dx();
  rep.hardy_littlewood_gap = static_cast<double>((hl_star - hl) * dx);
  rep.mixed_gap = static_cast<double>((mx_star - mx) * dx);

  const double kf = fd_kinetic(f), kg = fd_kinetic(g);
  rep.polya_szego_gap = std::min(kf - fd_kinetic(fs), kg - fd_kinetic(gs));
  const double sf = spectral_kinetic(f), sg = spectral_kinetic(g);
  rep.polya_szego_gap_spectral =
      std::min(sf - spectral_kinetic(fs), sg - spectral_kinetic(gs));

  const double scale = std::max({kf, kg, sf, sg});
  rep.tol_ps = polya_szego_tolerance(*f.grid, scale);
  rep.polya_szego_status = classify_gap(rep.polya_szego_gap, kRoundoff * scale, rep.tol_ps);
  rep.polya_szego_spectral_status =
      classify_gap(rep.polya_szego_gap_spectral, kRoundoff * scale, rep.tol_ps);
  return rep;
}

namespace {

void require_even_decreasing(const RealField& w, const char* name) {
  const int n = w.size(), c = w.grid->center_index();
  double peak = 0.0;
  for (double v : w.values) peak = std::max(peak, v);
  const double tol = 1e-12 * std::max(peak, 1.0);
  for (int j = 1; j < n / 2; ++j) {
    if (std::abs(w[c + j] - w[c - j]) > tol) {
      throw ValidationError(std::string(name) + " is not even");
    }
    if (w[c + j] > w[c + j - 1] + tol) {
      throw ValidationError(std::string(name) + " is not non-increasing on x >= 0");
    }
  }
  if (w[0] != 0.0 || w[n - 1] != 0.0) {
    throw ValidationError(std::string(name) + " is not compactly supported inside the box");
  }
}

std::vector<double> cyclic_shift(const std::vector<double>& v, int cells) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = v[wrap(j + cells, n)];
  return out;
}

}  // namespace

RearrangeReport garrisi_check(const RealField& u, const RealField& v, double separation) {
  require_same_grid(u.grid, v.grid);
  require_nonnegative(u, "u");
  require_nonnegative(v, "v");
  require_even_decreasing(u, "u");
  require_even_decreasing(v, "v");

  const auto& grid = *u.grid;
  const int cells = static_cast<int>(std::lround(0.5 * separation / grid.dx()));
  // u(x + x1) with x1 = cells*dx, v(x + x2) with x2 = -cells*dx.
  const auto us = cyclic_shift(u.values, cells);
  const auto vs = cyclic_shift(v.values, -cells);
  RealField w(u.grid);
  for (int j = 0; j < w.size(); ++j) {
    if (us[j] > 0.0 && vs[j] > 0.0) {
      throw ValidationError("garrisi_check: shifted supports overlap; increase the separation");
    }
    w[j] = us[j] + vs[j];
  }
  const auto ws = decreasing_rearrangement(w);

  RearrangeReport rep;
  const double ku = fd_kinetic(u), kv = fd_kinetic(v), kw = fd_kinetic(w);
  rep.garrisi_lhs = fd_kinetic(ws);
  rep.garrisi_rhs = kw - 0.75 * std::min(ku, kv);
  rep.tol_ps = polya_szego_tolerance(grid, kw);
  rep.garrisi_status = classify_gap(rep.garrisi_rhs - rep.garrisi_lhs, kRoundoff * kw, rep.tol_ps);
  rep.polya_szego_gap = kw - rep.garrisi_lhs;
  rep.polya_szego_status = classify_gap(rep.polya_szego_gap, kRoundoff * kw, rep.tol_ps);
  rep.polya_szego_gap_spectral = spectral_kinetic(w) - spectral_kinetic(ws);
  rep.polya_szego_spectral_status =
      classify_gap(rep.polya_szego_gap_spectral, kRoundoff * kw, rep.tol_ps);
  rep.multiset_preserved = true;
  return rep;
}

EnergyDrop rearrangement_energy_drop(const RealField& f, const RealField& g, const PhysParams& prm) {
  require_same_grid(f.grid, g.grid);
  require_nonnegative(f, "f");
  require_nonnegative(g, "g");
  const auto fs = decreasing_rearrangement(f);
  const auto gs = decreasing_rearrangement(g);
  const ComplexField fc(f), fsc(fs);

  const auto before = energy_terms(fc, g, prm);
  const auto after = energy_terms(fsc, gs, prm);
  EnergyDrop drop;
  drop.spectral = before.energy(prm) - after.energy(prm);
  // Same potential terms, forward-difference kinetic terms.
  const double pot_before = before.energy(prm) - before.kinetic_u - before.kinetic_v;
  const double pot_after = after.energy(prm) - after.kinetic_u - after.kinetic_v;
  drop.finite_difference =
      (fd_kinetic(f) + fd_kinetic(g) + pot_before) - (fd_kinetic(fs) + fd_kinetic(gs) + pot_after);
  drop.scale = std::max(before.magnitude(prm), fd_kinetic(f) + fd_kinetic(g));
  return drop;
}

RealField smooth_bump(const GridPtr& grid, double amplitude, double radius, double center) {
  return sample(grid, [=](double x) {
    const double r = (x - center) / radius;
    if (std::abs(r) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
  });
}

}  // namespace nlskdv
