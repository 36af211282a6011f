#include "nlskdv/functionals.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace nlskdv {

void to_json(nlohmann::json& j, const ConservedTriple& c) {
  j = nlohmann::json{{"E", c.E}, {"G", c.G}, {"H", c.H}};
}

void from_json(const nlohmann::json& j, ConservedTriple& c) {
  j.at("E").get_to(c.E);
  j.at("G").get_to(c.G);
  j.at("H").get_to(c.H);
}

double EnergyTerms::energy(const PhysParams& prm) const {
  return kinetic_u + kinetic_v - prm.beta1() * nls_power - prm.beta2() * kdv_power -
         prm.alpha() * coupling;
}

double EnergyTerms::magnitude(const PhysParams& prm) const {
  return std::abs(kinetic_u) + std::abs(kinetic_v) + prm.beta1() * std::abs(nls_power) +
         prm.beta2() * std::abs(kdv_power) + prm.alpha() * std::abs(coupling);
}

EnergyTerms energy_terms(const ComplexField& u, const RealField& v, const PhysParams& prm) {
  require_same_grid(u.grid, v.grid);
  const auto ux = deriv(u, 1);
  const auto vx = deriv(v, 1);
  const auto pp2 = prm.p_plus_2();
  const double q2 = prm.q() + 2.0;
  long double ku = 0, kv = 0, np = 0, kp = 0, cp = 0;
  for (int j = 0; j < u.size(); ++j) {
    const double m2 = std::norm(u[j]);
    ku += std::norm(ux[j]);
    kv += vx[j] * vx[j];
    np += std::pow(m2, 0.5 * q2);
    kp += signed_pow(v[j], pp2);
    cp += m2 * v[j];
  }
  const double dx = u.grid->dx();
  return EnergyTerms{static_cast<double>(ku) * dx, static_cast<double>(kv) * dx,
                     static_cast<double>(np) * dx, static_cast<double>(kp) * dx,
                     static_cast<double>(cp) * dx};
}

double energy(const ComplexField& u, const RealField& v, const PhysParams& prm) {
  return energy_terms(u, v, prm).energy(prm);
}

double charge(const ComplexField& u) { return norm_sq(u); }

double momentum(const ComplexField& u, const RealField& v) {
  require_same_grid(u.grid, v.grid);
  const auto ux = deriv(u, 1);
  long double im = 0.0L;
  for (int j = 0; j < u.size(); ++j) im += (u[j] * std::conj(ux[j])).imag();
  return norm_sq(v) + static_cast<double>(im) * u.grid->dx();
}

double kdv_action(const RealField& g, const PhysParams& prm) {
  const auto gx = deriv(g, 1);
  const auto pp2 = prm.p_plus_2();
  long double acc = 0.0L;
  for (int j = 0; j < g.size(); ++j) acc += gx[j] * gx[j] - prm.beta2() * signed_pow(g[j], pp2);
  return static_cast<double>(acc) * g.grid->dx();
}

double nls_action(const ComplexField& f, const PhysParams& prm) {
  const auto fx = deriv(f, 1);
  const double half_q2 = 0.5 * (prm.q() + 2.0);
  long double acc = 0.0L;
  for (int j = 0; j < f.size(); ++j) {
    acc += std::norm(fx[j]) - prm.beta1() * std::pow(std::norm(f[j]), half_q2);
  }
  return static_cast<double>(acc) * f.grid->dx();
}

ConservedTriple conserved(const ComplexField& u, const RealField& v, const PhysParams& prm) {
  return ConservedTriple{energy(u, v, prm), momentum(u, v), charge(u)};
}

}  // namespace nlskdv
