#include "nlskdv/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nlskdv/error.hpp"

namespace nlskdv {

namespace {

constexpr cdouble kI{0.0, 1.0};

bool finite_spectrum(const std::vector<cdouble>& h) {
  long double acc = 0.0L;
  for (const auto& z : h) acc += std::norm(z);
  return std::isfinite(static_cast<double>(acc));
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double x : f.values) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& z : f.values) m = std::max(m, std::abs(z));
  return m;
}

// 1 + k^2 with the Nyquist entry treated as in h1_norm_sq.
std::vector<double> h1_weight(const Grid1D& g) {
  std::vector<double> w(g.size());
  for (int j = 0; j < g.size(); ++j) w[j] = 1.0 + std::norm(derivative_symbol(g, j, 1));
  return w;
}

}  // namespace

EvolveState solitary_initial(const SolitaryWavePair& pair, double c, double omega,
                             const PhysParams& prm) {
  require(std::isfinite(c) && std::isfinite(omega), "solitary_initial: c and omega must be finite");
  if (std::isfinite(pair.sigma)) {
    require(std::abs(omega - (pair.sigma + 0.25 * c * c)) <= 1e-8 * (1.0 + std::abs(omega)),
            "solitary_initial: omega must equal sigma + c^2/4");
  }
  require_same_grid(pair.phi.grid, pair.psi.grid);
  const auto& grid = pair.phi.grid;
  EvolveState st{ComplexField(grid), pair.psi, 0.0, prm};
  for (int j = 0; j < grid->size(); ++j) {
    st.u[j] = std::polar(1.0, 0.5 * c * grid->x(j)) * pair.phi[j];
  }
  return st;
}

EvolveState solitary_initial(const SolitaryWavePair& pair, const PhysParams& prm) {
  const double c = std::isfinite(pair.c) ? pair.c : 0.0;
  const double sigma = std::isfinite(pair.sigma) ? pair.sigma : 0.0;
  return solitary_initial(pair, c, sigma + 0.25 * c * c, prm);
}

double max_stable_dt(const EvolveState& state) {
  const auto& prm = state.prm;
  const double um = max_abs(state.u), vm = max_abs(state.v);
  const double kd = 2.0 / 3.0 * state.u.grid->k_max();
  const double rate = kd * (prm.tau2() * std::pow(vm, prm.p_value()) + prm.alpha() * um) +
                      (1.0 + 0.5 * prm.q()) * prm.tau1() * std::pow(um, prm.q()) +
                      prm.alpha() * vm;
  return rate > 0.0 ? 1.4 / rate : std::numeric_limits<double>::infinity();
}

Integrator::Integrator(const GridPtr& grid, const PhysParams& prm, double dt)
    : grid_(grid), prm_(prm), dt_(dt) {
  require(std::isfinite(dt) && dt != 0.0, "integrator: dt must be finite and non-zero");
  const int n = grid->size();
  const auto k = grid->wavenumbers();
  mask_.resize(n);
  dx_symbol_.resize(n);
  eu_half_.resize(n);
  eu_full_.resize(n);
  ev_half_.resize(n);
  ev_full_.resize(n);
  for (int j = 0; j < n; ++j) {
    const int m = j < n / 2 ? j : j - n;
    mask_[j] = 3 * std::abs(m) < n ? 1.0 : 0.0;
    dx_symbol_[j] = -derivative_symbol(*grid, j, 1);
    const double k2 = k[j] * k[j], k3 = k2 * k[j];
    eu_half_[j] = std::polar(1.0, -k2 * dt / 2);
    eu_full_[j] = std::polar(1.0, -k2 * dt);
    ev_half_[j] = std::polar(1.0, k3 * dt / 2);
    ev_full_[j] = std::polar(1.0, k3 * dt);
  }
}

void Integrator::load(const EvolveState& s, std::vector<cdouble>& uh,
                      std::vector<cdouble>& vh) const {
  require_same_grid(s.u.grid, grid_);
  require_same_grid(s.v.grid, grid_);
  uh = spectrum(s.u);
  vh = spectrum(s.v);
  for (std::size_t j = 0; j < uh.size(); ++j) {
    uh[j] *= mask_[j];
    vh[j] *= mask_[j];
  }
}

void Integrator::store(const std::vector<cdouble>& uh, const std::vector<cdouble>& vh,
                       EvolveState& s) const {
  s.u = from_spectrum(grid_, uh);
  s.v = real_from_spectrum(grid_, vh);
}

void Integrator::rhs(const std::vector<cdouble>& uh, const std::vector<cdouble>& vh,
                     std::vector<cdouble>& nu, std::vector<cdouble>& nv) const {
  const int n = grid_->size();
  std::vector<cdouble> u(n), v(n), a(n), w(n);
  fft::inverse(uh, u);
  fft::inverse(vh, v);
  const double half_q = 0.5 * prm_.q();
  const double kdv = prm_.tau2() / (prm_.p_value() + 1.0);
  const auto p1 = prm_.p_plus_1();
  for (int j = 0; j < n; ++j) {
    const double vr = v[j].real();
    const double m2 = std::norm(u[j]);
    a[j] = kI * (prm_.tau1() * std::pow(m2, half_q) + prm_.alpha() * vr) * u[j];
    w[j] = kdv * signed_pow(vr, p1) + 0.5 * prm_.alpha() * m2;
  }
  nu.resize(n);
  nv.resize(n);
  fft::forward(a, nu);
  fft::forward(w, nv);
  for (int j = 0; j < n; ++j) {
    nu[j] *= mask_[j];
    nv[j] *= mask_[j] * dx_symbol_[j];
  }
}

void Integrator::step(std::vector<cdouble>& uh, std::vector<cdouble>& vh) const {
  // Lawson RK4 on w = exp(-L t) u_hat.
  const int n = grid_->size();
  std::vector<cdouble> au, av, bu, bv, cu, cv, du, dv, tu(n), tv(n);
  rhs(uh, vh, au, av);
  for (int j = 0; j < n; ++j) {
    au[j] *= dt_;
    av[j] *= dt_;
    tu[j] = eu_half_[j] * (uh[j] + 0.5 * au[j]);
    tv[j] = ev_half_[j] * (vh[j] + 0.5 * av[j]);
  }
  rhs(tu, tv, bu, bv);
  for (int j = 0; j < n; ++j) {
    bu[j] *= dt_;
    bv[j] *= dt_;
    tu[j] = eu_half_[j] * uh[j] + 0.5 * bu[j];
    tv[j] = ev_half_[j] * vh[j] + 0.5 * bv[j];
  }
  rhs(tu, tv, cu, cv);
  for (int j = 0; j < n; ++j) {
    cu[j] *= dt_;
    cv[j] *= dt_;
    tu[j] = eu_full_[j] * uh[j] + eu_half_[j] * cu[j];
    tv[j] = ev_full_[j] * vh[j] + ev_half_[j] * cv[j];
  }
  rhs(tu, tv, du, dv);
  for (int j = 0; j < n; ++j) {
    uh[j] = eu_full_[j] * uh[j] +
            (eu_full_[j] * au[j] + 2.0 * eu_half_[j] * (bu[j] + cu[j]) + dt_ * du[j]) / 6.0;
    vh[j] = ev_full_[j] * vh[j] +
            (ev_full_[j] * av[j] + 2.0 * ev_half_[j] * (bv[j] + cv[j]) + dt_ * dv[j]) / 6.0;
    uh[j] *= mask_[j];
    vh[j] *= mask_[j];
  }
}

EvolveState step(const EvolveState& state, double dt) {
  const double bound = max_stable_dt(state);
  if (!(dt > 0.0) || dt > 2.0 * bound) {
    std::ostringstream msg;
    msg << "step: dt = " << dt << " outside (0, " << 2.0 * bound << "]";
    throw ValidationError(msg.str());
  }
  const Integrator integ(state.u.grid, state.prm, dt);
  std::vector<cdouble> uh, vh;
  integ.load(state, uh, vh);
  integ.step(uh, vh);
  if (!finite_spectrum(uh) || !finite_spectrum(vh)) {
    throw NumericalError("step: non-finite state (blow-up)");
  }
  EvolveState out = state;
  integ.store(uh, vh, out);
  out.time = state.time + dt;
  return out;
}

double y_norm(const ComplexField& u, const RealField& v) {
  return std::sqrt(h1_norm_sq(u) + h1_norm_sq(v));
}

ReferenceOrbit::ReferenceOrbit(const SolitaryWavePair& pair)
    : ReferenceOrbit(solitary_initial(pair, PhysParams()).u, pair.psi) {}

ReferenceOrbit::ReferenceOrbit(const ComplexField& Phi, const RealField& psi)
    : Phi_(Phi), psi_(psi) {
  require_same_grid(Phi.grid, psi.grid);
  Phi_hat_ = spectrum(Phi_);
  psi_hat_ = spectrum(psi_);
  weight_ = h1_weight(*Phi.grid);
}

double ReferenceOrbit::y_norm() const { return nlskdv::y_norm(Phi_, psi_); }

ReferenceOrbit::Fit ReferenceOrbit::fit(const ComplexField& u, const RealField& v) const {
  require_same_grid(u.grid, Phi_.grid);
  require_same_grid(v.grid, Phi_.grid);
  const auto& grid = *Phi_.grid;
  const int n = grid.size();
  const double scale = grid.dx() / n;
  const auto uh = spectrum(u);
  const auto vh = spectrum(v);
  std::vector<cdouble> ca(n), cb(n);
  for (int j = 0; j < n; ++j) {
    ca[j] = weight_[j] * Phi_hat_[j] * std::conj(uh[j]);
    cb[j] = weight_[j] * psi_hat_[j] * std::conj(vh[j]);
  }
  // A(y) = <Phi(. - y), u>_{H1}, B(y) = <psi(. - y), v>_{H1}; on the grid
  // shifts y_m = m dx both are forward DFTs.
  std::vector<cdouble> a(n), b(n);
  fft::forward(ca, a);
  fft::forward(cb, b);
  int best = 0;
  double fbest = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < n; ++m) {
    const double f = std::abs(a[m]) * scale + b[m].real() * scale;
    if (f > fbest) {
      fbest = f;
      best = m;
    }
  }
  const auto k = grid.wavenumbers();
  // F(y) = |A(y)| + B(y) and its first two derivatives.
  auto eval = [&](double y, double& f1, double& f2) {
    cdouble A{}, A1{}, A2{}, B{}, B1{}, B2{};
    for (int j = 0; j < n; ++j) {
      const cdouble e = std::polar(1.0, -k[j] * y);
      const cdouble ta = ca[j] * e, tb = cb[j] * e;
      A += ta;
      A1 += -kI * k[j] * ta;
      A2 += -k[j] * k[j] * ta;
      B += tb;
      B1 += -kI * k[j] * tb;
      B2 += -k[j] * k[j] * tb;
    }
    A *= scale, A1 *= scale, A2 *= scale, B *= scale, B1 *= scale, B2 *= scale;
    const double am = std::abs(A);
    if (am > 0.0) {
      const double r1 = (std::conj(A) * A1).real();
      f1 = r1 / am + B1.real();
      f2 = (std::norm(A1) + (std::conj(A) * A2).real()) / am - r1 * r1 / (am * am * am) +
           B2.real();
    } else {
      f1 = B1.real();
      f2 = B2.real();
    }
    return A;
  };
  double y = best * grid.dx();
  if (y >= grid.half_length()) y -= 2.0 * grid.half_length();
  for (int it = 0; it < 40; ++it) {
    double f1 = 0.0, f2 = 0.0;
    eval(y, f1, f2);
    double dy = f2 < 0.0 ? -f1 / f2 : (f1 > 0.0 ? 0.5 : -0.5) * grid.dx();
    dy = std::clamp(dy, -grid.dx(), grid.dx());
    y += dy;
    if (std::abs(dy) < 1e-14 * grid.half_length()) break;
  }
  double f1 = 0.0, f2 = 0.0;
  const cdouble A = eval(y, f1, f2);
  const double theta = std::abs(A) > 0.0 ? -std::arg(A) : 0.0;

  long double acc = 0.0L;
  for (int j = 0; j < n; ++j) {
    const cdouble e = std::polar(1.0, -k[j] * y);
    acc += weight_[j] * std::norm(std::polar(1.0, theta) * Phi_hat_[j] * e - uh[j]);
    acc += weight_[j] * std::norm(psi_hat_[j] * e - vh[j]);
  }
  return Fit{std::sqrt(static_cast<double>(acc) * scale), y, theta};
}

double orbital_distance(const EvolveState& state, const ReferenceOrbit& reference) {
  return reference.fit(state.u, state.v).distance;
}

double orbital_distance(const EvolveState& state, const SolitaryWavePair& reference) {
  return orbital_distance(state, ReferenceOrbit(reference));
}

double EvolveTrace::max_distance() const {
  double m = 0.0;
  for (double d : distance) m = std::max(m, d);
  return m;
}

EvolveTrace evolve(const EvolveState& state, double T, double dt, int sample_every,
                   const ReferenceOrbit* reference) {
  require(std::isfinite(T) && T >= 0.0, "evolve: T must be non-negative");
  require(sample_every >= 1, "evolve: sample_every must be at least 1");
  require_finite(state.u, "u");
  require_finite(state.v, "v");
  const double bound = max_stable_dt(state);
  if (!(dt > 0.0) || dt > 2.0 * bound) {
    std::ostringstream msg;
    msg << "evolve: dt = " << dt << " outside (0, " << 2.0 * bound << "]";
    throw ValidationError(msg.str());
  }
  const long steps = std::lround(T / dt);
  require(std::abs(steps * dt - T) <= 1e-9 * std::max(1.0, T),
          "evolve: T must be an integer multiple of dt");

  EvolveTrace tr;
  tr.dt = dt;
  tr.outside_theorem = !state.prm.within_stability_range();
  const Integrator integ(state.u.grid, state.prm, dt);
  std::vector<cdouble> uh, vh;
  integ.load(state, uh, vh);
  EvolveState cur = state;
  auto record = [&](long s) {
    integ.store(uh, vh, cur);
    cur.time = state.time + s * dt;
    tr.times.push_back(cur.time);
    tr.conserved.push_back(conserved(cur.u, cur.v, cur.prm));
    if (reference != nullptr) tr.distance.push_back(orbital_distance(cur, *reference));
    tr.final_state = cur;
    tr.steps = s;
  };
  record(0);
  std::vector<cdouble> uh_prev, vh_prev;
  for (long s = 1; s <= steps; ++s) {
    uh_prev = uh;
    vh_prev = vh;
    integ.step(uh, vh);
    if (!finite_spectrum(uh) || !finite_spectrum(vh)) {
      tr.status = "blow-up";
      std::ostringstream msg;
      msg << "non-finite state at step " << s << " (t = " << state.time + s * dt << ")";
      tr.message = msg.str();
      uh = std::move(uh_prev);
      vh = std::move(vh_prev);
      if (tr.steps != s - 1) record(s - 1);
      break;
    }
    if (s % sample_every == 0 || s == steps) record(s);
  }

  const auto& c0 = tr.conserved.front();
  auto rel = [](double x, double x0) {
    return x0 != 0.0 ? std::abs(x - x0) / std::abs(x0) : std::abs(x - x0);
  };
  for (const auto& c : tr.conserved) {
    tr.drift.H = std::max(tr.drift.H, rel(c.H, c0.H));
    tr.drift.G = std::max(tr.drift.G, rel(c.G, c0.G));
    tr.drift.E = std::max(tr.drift.E, rel(c.E, c0.E));
  }
  return tr;
}

EvolveState perturb(const EvolveState& state, double eps_abs, std::uint64_t seed,
                    double k_width) {
  require(std::isfinite(eps_abs) && eps_abs >= 0.0, "perturb: eps must be non-negative");
  require(k_width > 0.0, "perturb: spectral width must be positive");
  const auto& grid = state.u.grid;
  const int n = grid->size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto k = grid->wavenumbers();
  std::vector<cdouble> uh(n), vh(n);
  for (int j = 0; j < n; ++j) {
    const double env = std::exp(-0.5 * k[j] * k[j] / (k_width * k_width));
    uh[j] = env * cdouble(normal(rng), normal(rng));
    vh[j] = env * cdouble(normal(rng), normal(rng));
  }
  ComplexField du = from_spectrum(grid, uh);
  RealField dv = real_from_spectrum(grid, vh);
  const double width = 0.25 * grid->half_length();
  for (int j = 0; j < n; ++j) {
    const double x = grid->x(j);
    const double win = std::exp(-0.5 * x * x / (width * width));
    du[j] *= win;
    dv[j] *= win;
  }
  const double nrm = y_norm(du, dv);
  EvolveState out = state;
  if (eps_abs == 0.0 || nrm == 0.0) return out;
  const double f = eps_abs / nrm;
  const double h0 = charge(state.u);
  for (int j = 0; j < n; ++j) {
    out.u[j] += f * du[j];
    out.v[j] += f * dv[j];
  }
  const double h1 = charge(out.u);
  if (h1 > 0.0) out.u = cdouble(std::sqrt(h0 / h1)) * out.u;
  return out;
}

}  // namespace nlskdv
