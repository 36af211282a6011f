#include "nlskdv/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "nlskdv/error.hpp"
#include "nlskdv/exact.hpp"
#include "nlskdv/functionals.hpp"
#include "nlskdv/rearrange.hpp"

namespace nlskdv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();

cdouble dd_symbol(const Grid1D& g, int j) {
  const cdouble d = derivative_symbol(g, j, 1);
  return d * d;
}

// Second derivative as D∘D, so that -<f'', f> equals the spectral ∫|f'|^2 exactly.
ComplexField dd(const ComplexField& f) {
  auto hat = spectrum(f);
  for (int j = 0; j < f.size(); ++j) hat[j] *= dd_symbol(*f.grid, j);
  return from_spectrum(f.grid, hat);
}

RealField dd(const RealField& f) {
  auto hat = spectrum(f);
  for (int j = 0; j < f.size(); ++j) hat[j] *= dd_symbol(*f.grid, j);
  return real_from_spectrum(f.grid, hat);
}

// (-d^2/dx^2 + mu)^{-1}. With `consistent` the symbol is that of -D∘D, whose
// Nyquist entry is 0 rather than k^2: the preconditioner must match the
// operator there or the Nyquist mode converges at rate ~ mu / k_max^2.
template <class Field>
Field inverse_helmholtz(const Field& f, double mu, bool consistent = true) {
  auto hat = spectrum(f);
  const auto k = f.grid->wavenumbers();
  for (int j = 0; j < f.size(); ++j) {
    const double k2 = consistent ? -dd_symbol(*f.grid, j).real() : k[j] * k[j];
    hat[j] /= k2 + mu;
  }
  if constexpr (std::is_same_v<Field, RealField>) {
    return real_from_spectrum(f.grid, hat);
  } else {
    return from_spectrum(f.grid, hat);
  }
}

ComplexField scaled_to(const ComplexField& f, double mass) {
  const double m = norm_sq(f);
  return cdouble(std::sqrt(mass / m)) * f;
}

RealField scaled_to(const RealField& f, double mass) {
  const double m = norm_sq(f);
  return std::sqrt(mass / m) * f;
}

// sech^2 profile carrying the given mass, for components without a
// closed-form decoupled ground state.
RealField fallback_profile(double mass, const GridPtr& grid) {
  return SechProfile{1.0, 1.0, lambda_for_mass(mass, 1.0, 1.0, *grid)}.sample(grid);
}

struct Problem {
  PhysParams prm;
  double s;
  double t;
  bool phi_on() const { return s > 0.0; }
  bool psi_on() const { return t > 0.0; }
};

struct Iterate {
  ComplexField phi;
  RealField psi;
  double E = 0.0;
  double scale = 0.0;
  ComplexField dphi;  // tangent descent direction in the preconditioned metric
  RealField dpsi;
  double gd = 0.0;  // <g, d> = squared gradient norm in that metric
  double res = 0.0;  // max of the two EL residual L2 norms
  double sigma = kNaN;
  double c = kNaN;
};

void evaluate(const Problem& pb, Iterate& it) {
  const auto terms = energy_terms(it.phi, it.psi, pb.prm);
  it.E = terms.energy(pb.prm);
  it.scale = terms.magnitude(pb.prm);
  auto [gphi, gpsi] = energy_gradient(it.phi, it.psi, pb.prm);
  it.gd = 0.0;
  it.res = 0.0;
  it.dphi = ComplexField(it.phi.grid);
  it.dpsi = RealField(it.psi.grid);
  // g = 2 (r - sigma f) with r the EL residual; building d from r rather than
  // g avoids the O(1) cancellation in <g, d> once r is small.
  if (pb.phi_on()) {
    const double s = norm_sq(it.phi);
    it.sigma = -inner(gphi, it.phi) / (2.0 * s);
    const auto r = cdouble(0.5) * gphi + cdouble(it.sigma) * it.phi;
    it.res = std::max(it.res, norm(r));
    const double mu = std::clamp(it.sigma, 1e-2, 1e3);
    const auto pr = inverse_helmholtz(r, mu);
    const auto pf = inverse_helmholtz(it.phi, mu);
    const double gamma = inner(pr, it.phi) / inner(pf, it.phi);
    it.dphi = cdouble(2.0) * (pr - cdouble(gamma) * pf);
    it.gd += 2.0 * inner(r, it.dphi);
  }
  if (pb.psi_on()) {
    const double t = norm_sq(it.psi);
    it.c = -inner(gpsi, it.psi) / (2.0 * t);
    const auto r = 0.5 * gpsi + it.c * it.psi;
    it.res = std::max(it.res, norm(r));
    const double mu = std::clamp(it.c, 1e-2, 1e3);
    const auto pr = inverse_helmholtz(r, mu);
    const auto pf = inverse_helmholtz(it.psi, mu);
    const double gamma = inner(pr, it.psi) / inner(pf, it.psi);
    it.dpsi = 2.0 * (pr - gamma * pf);
    it.gd += 2.0 * inner(r, it.dpsi);
  }
}

Iterate make_iterate(const Problem& pb, ComplexField phi, RealField psi) {
  Iterate it;
  it.phi = std::move(phi);
  it.psi = std::move(psi);
  evaluate(pb, it);
  return it;
}

Iterate step_to(const Problem& pb, const Iterate& it, double tau) {
  ComplexField phi = it.phi;
  RealField psi = it.psi;
  if (pb.phi_on()) phi = scaled_to(it.phi - cdouble(tau) * it.dphi, pb.s);
  if (pb.psi_on()) psi = scaled_to(it.psi - tau * it.dpsi, pb.t);
  return make_iterate(pb, std::move(phi), std::move(psi));
}

Iterate rearranged(const Problem& pb, const Iterate& it) {
  ComplexField phi = it.phi;
  RealField psi = it.psi;
  if (pb.phi_on()) phi = ComplexField(decreasing_rearrangement(it.phi.modulus()));
  if (pb.psi_on()) {
    RealField a = it.psi;
    for (auto& x : a.values) x = std::abs(x);
    psi = decreasing_rearrangement(a);
  }
  return make_iterate(pb, std::move(phi), std::move(psi));
}

bool finite_iterate(const Iterate& it) {
  return std::isfinite(it.E) && std::isfinite(it.gd) && std::isfinite(it.res);
}

// Projected, Sobolev-preconditioned gradient descent at fixed parameters.
void descend(const Problem& pb, Iterate& it, double tol, const MinimizeOptions& opts,
             MinimizeReport& rep, double& tau) {
  int local = 0;
  while (it.res > tol) {
    if (rep.iterations >= opts.max_iter) {
      std::ostringstream msg;
      msg << "minimize_I: no convergence after " << rep.iterations
          << " iterations (EL residual " << it.res << ", tol " << tol << ")";
      throw NonConvergence(msg.str());
    }
    const double band = 64.0 * kEps * std::max(it.scale, 1e-300);
    if (opts.stabilize_every > 0 && local <= opts.stabilize_until &&
        local % opts.stabilize_every == 0) {
      Iterate cand = rearranged(pb, it);
      if (finite_iterate(cand) && cand.E < it.E - band) {
        it = std::move(cand);
        ++rep.rearrangements_accepted;
        rep.energy_history.push_back(it.E);
      }
    }
    Iterate next = step_to(pb, it, tau);
    bool accept = false;
    bool clean = false;
    if (finite_iterate(next)) {
      const double drop = it.E - next.E;
      if (drop > band) {
        accept = drop >= opts.armijo * tau * it.gd;
        clean = accept;
      } else {
        // Energy flat to roundoff: the preconditioned gradient norm is the merit.
        accept = drop >= -band && next.gd < it.gd;
      }
    }
    if (accept) {
      it = std::move(next);
      rep.energy_history.push_back(it.E);
      ++rep.iterations;
      ++local;
      if (clean) tau = std::min(tau * 1.5, opts.max_step);
    } else {
      tau *= opts.backtrack;
      if (tau < 1e-14) {
        std::ostringstream msg;
        msg << "minimize_I: line search stalled (EL residual " << it.res << ", tol " << tol
            << ")";
        throw NonConvergence(msg.str());
      }
    }
  }
  rep.final_step = tau;
}

// Circular centroid of a non-negative weight, as a position in [-L, L).
double centroid(const RealField& w) {
  const double L = w.grid->half_length();
  cdouble z{};
  for (int j = 0; j < w.size(); ++j) {
    z += w[j] * std::polar(1.0, std::numbers::pi * w.grid->x(j) / L);
  }
  return std::arg(z) * L / std::numbers::pi;
}

SolitaryWavePair finalize(const Problem& pb, const Iterate& it, const MinimizeOptions& opts) {
  ComplexField phi = it.phi;
  RealField psi = it.psi;
  if (opts.center) {
    RealField w(phi.grid);
    for (int j = 0; j < w.size(); ++j) w[j] = pb.psi_on() ? psi[j] * psi[j] : std::norm(phi[j]);
    const double xc = centroid(w);
    if (pb.phi_on()) phi = translate(phi, -xc);
    if (pb.psi_on()) psi = translate(psi, -xc);
  }
  if (pb.phi_on()) {
    const double theta = std::arg(integrate(phi));
    phi = std::polar(1.0, -theta) * phi;
    phi = scaled_to(ComplexField(phi.real()), pb.s);
  }
  if (pb.psi_on()) psi = scaled_to(psi, pb.t);

  SolitaryWavePair pair;
  pair.phi = std::move(phi);
  pair.psi = std::move(psi);
  pair.s = pb.s;
  pair.t = pb.t;
  const auto m = multipliers(pair.phi, pair.psi, pb.prm);
  pair.sigma = m.sigma;
  pair.c = m.c;
  pair.energy_value = energy(pair.phi, pair.psi, pb.prm);
  const auto r = el_residual(pair.phi, pair.psi, pb.prm);
  pair.el_residual_phi = r.phi;
  pair.el_residual_psi = r.psi;
  pair.boundary_leak = std::max(pb.phi_on() ? boundary_leak(pair.phi) : 0.0,
                                pb.psi_on() ? boundary_leak(pair.psi) : 0.0);
  pair.phi_positive = pb.phi_on() && std::all_of(pair.phi.values.begin(), pair.phi.values.end(),
                                                 [](cdouble z) { return z.real() > 0.0; });
  pair.psi_positive = pb.psi_on() && std::all_of(pair.psi.values.begin(), pair.psi.values.end(),
                                                 [](double x) { return x > 0.0; });
  return pair;
}

// Known infimum of a decoupled component without a minimizer.
[[noreturn]] void unattained(const std::string& why, double infimum) {
  throw UnattainedInfimum("minimize_I: " + why + "; infimum " + std::to_string(infimum) +
                              " is not attained",
                          infimum);
}

}  // namespace

void to_json(nlohmann::json& j, const MinimizeReport& r) {
  j = nlohmann::json{{"iterations", r.iterations},
                     {"stages", r.stages},
                     {"rearrangements_accepted", r.rearrangements_accepted},
                     {"final_step", r.final_step},
                     {"termination", r.termination},
                     {"I_value", r.I_value},
                     {"energy_history_length", r.energy_history.size()}};
}

std::pair<ComplexField, RealField> energy_gradient(const ComplexField& phi, const RealField& psi,
                                                   const PhysParams& prm) {
  require_same_grid(phi.grid, psi.grid);
  const auto phixx = dd(phi);
  const auto psixx = dd(psi);
  const double half_q = 0.5 * prm.q();
  const double a1 = (prm.q() + 2.0) * prm.beta1();
  const double a2 = (prm.p_value() + 2.0) * prm.beta2();
  const auto p1 = prm.p_plus_1();
  const double al = prm.alpha();
  ComplexField gphi(phi.grid);
  RealField gpsi(psi.grid);
  for (int j = 0; j < phi.size(); ++j) {
    const double m2 = std::norm(phi[j]);
    gphi[j] = -2.0 * phixx[j] - (a1 * std::pow(m2, half_q) + 2.0 * al * psi[j]) * phi[j];
    gpsi[j] = -2.0 * psixx[j] - a2 * signed_pow(psi[j], p1) - al * m2;
  }
  return {std::move(gphi), std::move(gpsi)};
}

Multipliers multipliers(const ComplexField& phi, const RealField& psi, const PhysParams& prm) {
  const auto e = energy_terms(phi, psi, prm);
  const double s = norm_sq(phi), t = norm_sq(psi);
  Multipliers m;
  m.sigma = s > 0.0 ? -(e.kinetic_u - prm.tau1() * e.nls_power - prm.alpha() * e.coupling) / s
                    : kNaN;
  m.c = t > 0.0 ? -(e.kinetic_v - prm.tau2() / (prm.p_value() + 1.0) * e.kdv_power -
                    0.5 * prm.alpha() * e.coupling) /
                      t
                : kNaN;
  return m;
}

Multipliers multipliers(const SolitaryWavePair& pair, const PhysParams& prm) {
  return multipliers(pair.phi, pair.psi, prm);
}

ElResidual el_residual(const ComplexField& phi, const RealField& psi, const PhysParams& prm) {
  require_same_grid(phi.grid, psi.grid);
  const auto m = multipliers(phi, psi, prm);
  const auto phixx = dd(phi);
  const auto psixx = dd(psi);
  const double half_q = 0.5 * prm.q();
  const double kdv = prm.tau2() / (prm.p_value() + 1.0);
  const auto p1 = prm.p_plus_1();
  ElResidual r;
  r.phi_field = ComplexField(phi.grid);
  r.psi_field = RealField(psi.grid);
  const bool phi_on = std::isfinite(m.sigma), psi_on = std::isfinite(m.c);
  for (int j = 0; j < phi.size(); ++j) {
    const double m2 = std::norm(phi[j]);
    if (phi_on) {
      r.phi_field[j] = -phixx[j] + m.sigma * phi[j] -
                       (prm.tau1() * std::pow(m2, half_q) + prm.alpha() * psi[j]) * phi[j];
    }
    if (psi_on) {
      r.psi_field[j] =
          -psixx[j] + m.c * psi[j] - kdv * signed_pow(psi[j], p1) - 0.5 * prm.alpha() * m2;
    }
  }
  r.phi = norm(r.phi_field);
  r.psi = norm(r.psi_field);
  return r;
}

ElResidual el_residual(const SolitaryWavePair& pair, const PhysParams& prm) {
  return el_residual(pair.phi, pair.psi, prm);
}

FixedPointDefect fixed_point_defect(const SolitaryWavePair& pair, const PhysParams& prm) {
  const auto m = multipliers(pair, prm);
  const auto& grid = pair.phi.grid;
  FixedPointDefect out;
  if (std::isfinite(m.sigma)) {
    if (!(m.sigma > 0.0)) throw NumericalError("fixed_point_defect: sigma must be positive");
    ComplexField rhs(grid);
    for (int j = 0; j < rhs.size(); ++j) {
      const cdouble f = pair.phi[j];
      rhs[j] = (prm.tau1() * std::pow(std::norm(f), 0.5 * prm.q()) + prm.alpha() * pair.psi[j]) * f;
    }
    const auto k = inverse_helmholtz(rhs, m.sigma, false);
    for (int j = 0; j < rhs.size(); ++j) out.phi = std::max(out.phi, std::abs(pair.phi[j] - k[j]));
  }
  if (std::isfinite(m.c)) {
    if (!(m.c > 0.0)) throw NumericalError("fixed_point_defect: c must be positive");
    RealField rhs(grid);
    const auto p1 = prm.p_plus_1();
    for (int j = 0; j < rhs.size(); ++j) {
      rhs[j] = prm.tau2() / (prm.p_value() + 1.0) * signed_pow(pair.psi[j], p1) +
               0.5 * prm.alpha() * std::norm(pair.phi[j]);
    }
    const auto k = inverse_helmholtz(rhs, m.c, false);
    for (int j = 0; j < rhs.size(); ++j) out.psi = std::max(out.psi, std::abs(pair.psi[j] - k[j]));
  }
  return out;
}

double mixed_action(const SolitaryWavePair& pair, const PhysParams& prm) {
  const auto e = energy_terms(pair.phi, pair.psi, prm);
  return e.kinetic_u - prm.beta1() * e.nls_power - prm.alpha() * e.coupling;
}

std::pair<SolitaryWavePair, MinimizeReport> minimize_I(double s, double t, const PhysParams& prm,
                                                       const GridPtr& grid,
                                                       const MinimizeOptions& opts,
                                                       const SolitaryWavePair* warm_start) {
  require(std::isfinite(s) && std::isfinite(t) && s >= 0.0 && t >= 0.0,
          "minimize_I: s and t must be finite and non-negative");
  require(s + t > 0.0, "minimize_I: s + t must be positive");
  require(opts.tol > 0.0 && opts.max_iter > 0, "minimize_I: tol and max_iter must be positive");

  // Components that cannot bind: the infimum is known and not attained.
  const bool nls_free = prm.beta1() == 0.0 && (prm.alpha() == 0.0 || t == 0.0);
  const bool kdv_free = prm.beta2() == 0.0 && (prm.alpha() == 0.0 || s == 0.0);
  if (s > 0.0 && nls_free) {
    const double rest = t > 0.0 ? I_value(0.0, t, prm, grid, opts) : 0.0;
    unattained("the phi component has no minimizer (beta1 = 0 and no coupling)", rest);
  }
  if (t > 0.0 && kdv_free) {
    const double rest = s > 0.0 ? I_value(s, 0.0, prm, grid, opts) : 0.0;
    unattained("the psi component has no minimizer (tau2 = 0 and no coupling)", rest);
  }

  const Problem target{prm, s, t};
  ComplexField phi0(grid);
  RealField psi0(grid);
  bool warm = false;
  if (warm_start != nullptr && *warm_start->phi.grid == *grid) {
    const bool phi_ok = s == 0.0 || norm_sq(warm_start->phi) > 0.0;
    const bool psi_ok = t == 0.0 || norm_sq(warm_start->psi) > 0.0;
    if (phi_ok && psi_ok) {
      if (s > 0.0) phi0 = scaled_to(warm_start->phi, s);
      if (t > 0.0) psi0 = scaled_to(warm_start->psi, t);
      warm = true;
    }
  }
  if (!warm) {
    if (t > 0.0) psi0 = prm.beta2() > 0.0 ? kdv_ground(t, prm, grid) : fallback_profile(t, grid);
    if (s > 0.0) {
      if (prm.beta1() > 0.0) {
        phi0 = ComplexField(nls_ground(s, prm, grid));
      } else {
        phi0 = ComplexField(t > 0.0 ? scaled_to(psi0, s) : fallback_profile(s, grid));
      }
    }
  }

  // Continuation in alpha; a stage at alpha = 0 is skipped when it would be unbounded.
  std::vector<double> alphas;
  if (!warm && opts.continuation_step > 0.0 && prm.alpha() > 0.0 && s > 0.0 && t > 0.0) {
    const int n = static_cast<int>(std::ceil(prm.alpha() / opts.continuation_step - 1e-12));
    for (int k = 0; k < n; ++k) {
      const double a = k * opts.continuation_step;
      const bool stage_free = (a == 0.0) && (prm.beta1() == 0.0 || prm.beta2() == 0.0);
      if (!stage_free) alphas.push_back(a);
    }
  }
  alphas.push_back(prm.alpha());

  MinimizeReport rep;
  double tau = opts.initial_step;
  Iterate it;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const bool last = k + 1 == alphas.size();
    const Problem pb{prm.with_alpha(alphas[k]), s, t};
    it = make_iterate(pb, std::move(phi0), std::move(psi0));
    if (rep.energy_history.empty() && last) rep.energy_history.push_back(it.E);
    descend(pb, it, last ? opts.tol : std::max(opts.stage_tol, opts.tol), opts, rep, tau);
    ++rep.stages;
    phi0 = it.phi;
    psi0 = it.psi;
    if (!last) rep.energy_history.clear();
  }
  rep.termination = "converged";

  auto pair = finalize(target, it, opts);
  rep.I_value = pair.energy_value;
  if (pair.boundary_leak > opts.leak_threshold) {
    std::ostringstream msg;
    msg << "minimize_I: boundary leak " << pair.boundary_leak << " exceeds "
        << opts.leak_threshold << "; enlarge L";
    throw BoundaryLeak(msg.str());
  }
  return {std::move(pair), std::move(rep)};
}

double I_value(double s, double t, const PhysParams& prm, const GridPtr& grid,
               const MinimizeOptions& opts) {
  try {
    return minimize_I(s, t, prm, grid, opts).first.energy_value;
  } catch (const UnattainedInfimum& e) {
    return e.infimum();
  }
}

namespace {

constexpr int kMaxWiden = 3;

// I(s, t) on `grid`, or on the smallest doubling of it (fixed dx, at most
// kMaxWiden times) inside which the minimizer decays.
double I_value_widened(double s, double t, const PhysParams& prm, const GridPtr& grid,
                       const MinimizeOptions& opts) {
  GridPtr g = grid;
  for (int widen = 0;; ++widen) {
    try {
      return I_value(s, t, prm, g, opts);
    } catch (const BoundaryLeak&) {
      if (widen == kMaxWiden) throw;
      g = make_grid(2.0 * g->half_length(), 2 * g->size());
    }
  }
}

}  // namespace

WSolution minimize_W(double s, double t, const PhysParams& prm, const GridPtr& grid,
                     const MinimizeOptions& opts) {
  require(std::isfinite(s) && s > 0.0, "minimize_W: s must be positive");
  require(std::isfinite(t), "minimize_W: t must be finite");

  struct Eval {
    double a;
    double value;
    double I;
    std::optional<SolitaryWavePair> pair;
  };
  std::vector<Eval> evals;
  WSolution out;

  auto nearest_warm = [&](double a) -> const SolitaryWavePair* {
    const SolitaryWavePair* best = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& e : evals) {
      if (e.pair && e.a > 0.0 && std::abs(e.a - a) < dist) {
        dist = std::abs(e.a - a);
        best = &*e.pair;
      }
    }
    return best;
  };
  auto f = [&](double a) -> double {
    const double b = (t - a) / s;
    Eval e{a, 0.0, 0.0, std::nullopt};
    if (a == 0.0 && prm.beta1() == 0.0) {
      e.I = 0.0;  // I(s, 0) = 0, not attained
    } else {
      try {
        auto [pair, rep] = minimize_I(s, a, prm, grid, opts, nearest_warm(a));
        e.I = pair.energy_value;
        e.pair = std::move(pair);
      } catch (const BoundaryLeak&) {
        // Small a spreads the minimizer out. Its value still enters the scan;
        // it just cannot be the reconstructed W-minimizer on this grid.
        e.I = I_value_widened(s, a, prm, grid, opts);
      }
    }
    ++out.solves;
    e.value = e.I + b * b * s;
    evals.push_back(std::move(e));
    out.scan.push_back({a, evals.back().value});
    return evals.back().value;
  };

  const double I_ref = I_value_widened(s, std::max(std::abs(t), 0.5), prm, grid, opts);
  double a_max = std::abs(t) + 4.0 * std::sqrt(s * std::abs(I_ref));
  constexpr int kNodes = 33;
  int best = 0;
  std::vector<double> nodes;
  for (int attempt = 0;; ++attempt) {
    nodes.assign(kNodes, 0.0);
    std::vector<double> vals(kNodes);
    for (int i = 0; i < kNodes; ++i) {
      nodes[i] = a_max * i / (kNodes - 1);
      vals[i] = f(nodes[i]);
    }
    best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    if (best < kNodes - 1 || attempt == 6) break;
    a_max *= 2.0;
  }
  out.a_max = a_max;

  // Golden-section refinement on the bracket around the best node.
  double lo = nodes[std::max(best - 1, 0)];
  double hi = nodes[std::min(best + 1, kNodes - 1)];
  const double width = 1e-6 * (1.0 + std::abs(t));
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > width) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }

  const auto it = std::min_element(evals.begin(), evals.end(),
                                   [](const Eval& a, const Eval& b) { return a.value < b.value; });
  if (!it->pair) {
    if (it->a == 0.0) {
      throw NumericalError("minimize_W: minimum at a = 0 where I(s, 0) is not attained");
    }
    throw BoundaryLeak("minimize_W: the minimizer at a* = " + std::to_string(it->a) +
                       " does not decay inside the box; enlarge L");
  }
  out.s = s;
  out.t = t;
  out.a_star = it->a;
  out.b = (t - it->a) / s;
  out.I_value = it->I;
  out.W_value = it->value;
  out.boundary_minimum = it->a >= a_max;
  out.reduced = *it->pair;
  out.psi = out.reduced.psi;
  out.Phi = ComplexField(grid);
  for (int j = 0; j < grid->size(); ++j) {
    out.Phi[j] = std::polar(1.0, -out.b * grid->x(j)) * out.reduced.phi[j];
  }
  out.sigma = out.reduced.sigma;
  out.c = out.a_star > 0.0 ? out.reduced.c : -2.0 * out.b;
  out.c_consistency = std::abs(out.c + 2.0 * out.b);
  out.omega = out.sigma + 0.25 * out.c * out.c;
  return out;
}

void to_json(nlohmann::json& j, const SubadditivityResult& r) {
  j = nlohmann::json{{"s1", r.s1}, {"t1", r.t1}, {"s2", r.s2}, {"t2", r.t2},
                     {"I1", r.I1}, {"I2", r.I2}, {"I12", r.I12}, {"margin", r.margin}, {"L", r.L}};
}

void check_subadditivity_preconditions(double s1, double t1, double s2, double t2) {
  require(s1 >= 0.0 && t1 >= 0.0 && s2 >= 0.0 && t2 >= 0.0,
          "subadditivity: masses must be non-negative");
  require(s1 + s2 > 0.0 && t1 + t2 > 0.0 && s1 + t1 > 0.0 && s2 + t2 > 0.0,
          "subadditivity: need s1+s2, t1+t2, s1+t1, s2+t2 all positive");
}

SubadditivityResult subadditivity_probe(double s1, double t1, double s2, double t2,
                                        const PhysParams& prm, const GridPtr& grid,
                                        const MinimizeOptions& opts) {
  check_subadditivity_preconditions(s1, t1, s2, t2);
  SubadditivityResult r{s1, t1, s2, t2};
  // Small masses spread out; all three values come from one box, doubled
  // (at fixed dx) until every minimizer decays inside it.
  GridPtr g = grid;
  for (int widen = 0;; ++widen) {
    try {
      r.I1 = I_value(s1, t1, prm, g, opts);
      r.I2 = I_value(s2, t2, prm, g, opts);
      r.I12 = I_value(s1 + s2, t1 + t2, prm, g, opts);
      break;
    } catch (const BoundaryLeak&) {
      if (widen == kMaxWiden) throw;
      g = make_grid(2.0 * g->half_length(), 2 * g->size());
    }
  }
  r.L = g->half_length();
  r.margin = r.I1 + r.I2 - r.I12;
  return r;
}

}  // namespace nlskdv
