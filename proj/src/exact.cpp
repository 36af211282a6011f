#include "nlskdv/exact.hpp"

#include <cmath>
#include <string>

#include "nlskdv/error.hpp"

namespace nlskdv {

double SechProfile::amplitude() const { return std::pow(lambda / beta, 1.0 / power); }

double SechProfile::operator()(double x) const {
  const double arg = std::sqrt(lambda) * power * x / 2.0;
  // sech(a) = 2 e^{-|a|} / (1 + e^{-2|a|}), stable for large |a|.
  const double e = std::exp(-std::abs(arg));
  const double sech = 2.0 * e / (1.0 + e * e);
  return amplitude() * std::pow(sech, 2.0 / power);
}

RealField SechProfile::sample(const GridPtr& grid) const {
  return nlskdv::sample(grid, [this](double x) { return (*this)(x); });
}

double SechProfile::fit_lambda(const RealField& profile, double power, double beta) {
  const double peak = profile[profile.grid->center_index()];
  if (!(peak > 0.0)) throw ValidationError("fit_lambda: profile must be positive at x = 0");
  return beta * std::pow(peak, power);
}

double profile_mass(double lambda, double power, double beta, const Grid1D& grid) {
  const SechProfile prof{power, beta, lambda};
  long double acc = 0.0L;
  for (int j = 0; j < grid.size(); ++j) {
    const double w = prof(grid.x(j));
    acc += w * w;
  }
  return static_cast<double>(acc) * grid.dx();
}

double lambda_for_mass(double target, double power, double beta, const Grid1D& grid) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw ValidationError("lambda_for_mass: target mass must be positive");
  }
  if (!(beta > 0.0)) throw ValidationError("lambda_for_mass: beta must be positive");
  // Work with h(y) = log(mass(e^y)) - log(target), increasing in y.
  auto h = [&](double y) {
    return std::log(profile_mass(std::exp(y), power, beta, grid)) - std::log(target);
  };
  double lo = std::log(1e-12), hi = std::log(1e12);
  double hlo = h(lo), hhi = h(hi);
  if (!(hlo <= 0.0 && hhi >= 0.0)) {
    throw NumericalError("lambda_for_mass: target " + std::to_string(target) +
                         " not bracketed on [1e-12, 1e12]");
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    // Secant candidate from the bracket ends, bisection if it falls outside.
    double cand = (hhi != hlo) ? hi - hhi * (hi - lo) / (hhi - hlo) : 0.5 * (lo + hi);
    if (!(cand > lo && cand < hi) || it % 3 == 2) cand = 0.5 * (lo + hi);
    const double hc = h(cand);
    y = cand;
    if (hc == 0.0) break;
    if (hc < 0.0) {
      lo = cand;
      hlo = hc;
    } else {
      hi = cand;
      hhi = hc;
    }
    if (std::abs(hc) < 1e-14 || hi - lo < 1e-15 * (1.0 + std::abs(y))) break;
  }
  return std::exp(y);
}

SechProfile kdv_ground_profile(double t_mass, const PhysParams& prm, const Grid1D& grid) {
  if (!(prm.beta2() > 0.0)) throw ValidationError("kdv_ground: tau2 must be positive");
  const double power = prm.p_value();
  return SechProfile{power, prm.beta2(), lambda_for_mass(t_mass, power, prm.beta2(), grid)};
}

RealField kdv_ground(double t_mass, const PhysParams& prm, const GridPtr& grid) {
  return kdv_ground_profile(t_mass, prm, *grid).sample(grid);
}

SechProfile nls_ground_profile(double s_mass, const PhysParams& prm, const Grid1D& grid) {
  if (!(prm.beta1() > 0.0)) {
    throw ValidationError(
        "nls_ground: tau1 = 0 has no decoupled NLS ground state (the constrained infimum is 0)");
  }
  return SechProfile{prm.q(), prm.beta1(), lambda_for_mass(s_mass, prm.q(), prm.beta1(), grid)};
}

RealField nls_ground(double s_mass, const PhysParams& prm, const GridPtr& grid) {
  return nls_ground_profile(s_mass, prm, *grid).sample(grid);
}

}  // namespace nlskdv
