#pragma once

#include <nlohmann/json_fwd.hpp>

#include "nlskdv/grid.hpp"
#include "nlskdv/params.hpp"

namespace nlskdv {

/// E, G, H at one instant.
struct ConservedTriple {
  double E = 0.0;
  double G = 0.0;
  double H = 0.0;
};

void to_json(nlohmann::json& j, const ConservedTriple& c);
void from_json(const nlohmann::json& j, ConservedTriple& c);

/// E(u,v) = ∫ |u_x|^2 + v_x^2 - beta1 |u|^(q+2) - beta2 v^(p+2) - alpha |u|^2 v dx.
double energy(const ComplexField& u, const RealField& v, const PhysParams& prm);

/// H(u) = ∫ |u|^2 dx.
double charge(const ComplexField& u);

/// G(u,v) = ∫ v^2 dx + Im ∫ u conj(u_x) dx.
double momentum(const ComplexField& u, const RealField& v);

/// J(g) = ∫ g_x^2 - beta2 g^(p+2) dx.
double kdv_action(const RealField& g, const PhysParams& prm);

/// J~(f) = ∫ |f_x|^2 - beta1 |f|^(q+2) dx.
double nls_action(const ComplexField& f, const PhysParams& prm);

ConservedTriple conserved(const ComplexField& u, const RealField& v, const PhysParams& prm);

/// The separate pieces of E, handy for scaling arguments and diagnostics.
struct EnergyTerms {
  double kinetic_u = 0.0;  // ∫ |u_x|^2
  double kinetic_v = 0.0;  // ∫ v_x^2
  double nls_power = 0.0;  // ∫ |u|^(q+2)
  double kdv_power = 0.0;  // ∫ v^(p+2), signed
  double coupling = 0.0;   // ∫ |u|^2 v

  double energy(const PhysParams& prm) const;
  /// Sum of absolute contributions, used to scale roundoff tolerances.
  double magnitude(const PhysParams& prm) const;
};

EnergyTerms energy_terms(const ComplexField& u, const RealField& v, const PhysParams& prm);

}  // namespace nlskdv
