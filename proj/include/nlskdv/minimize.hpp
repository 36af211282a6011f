#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nlskdv/grid.hpp"
#include "nlskdv/params.hpp"

namespace nlskdv {

/// A converged constrained minimizer (phi, psi) of I(s, t) with its
/// multipliers and diagnostics. phi is stored real and phase-normalized.
struct SolitaryWavePair {
  ComplexField phi;
  RealField psi;
  double sigma = 0.0;
  double c = 0.0;
  double s = 0.0;
  double t = 0.0;
  double energy_value = 0.0;
  double el_residual_phi = 0.0;
  double el_residual_psi = 0.0;
  double boundary_leak = 0.0;
  bool phi_positive = false;
  bool psi_positive = false;
};

struct MinimizeOptions {
  double tol = 1e-8;           // on the L2 norm of each EL residual
  int max_iter = 200000;       // summed over continuation stages
  double armijo = 1e-4;
  double backtrack = 0.5;
  double initial_step = 0.5;
  double max_step = 4.0;
  double continuation_step = 0.25;  // alpha increments; <= 0 disables continuation
  double stage_tol = 1e-6;          // tolerance for intermediate alpha stages
  int stabilize_every = 50;         // try (|phi|*, |psi|*) this often ...
  int stabilize_until = 2000;       // ... during the first iterations of a stage
  double leak_threshold = 1e-8;
  bool center = true;
};

struct MinimizeReport {
  int iterations = 0;
  int stages = 0;
  int rearrangements_accepted = 0;
  double final_step = 0.0;
  std::vector<double> energy_history;  // one entry per accepted iterate
  std::string termination;             // "converged" or "stalled"
  double I_value = 0.0;
};

void to_json(nlohmann::json& j, const MinimizeReport& r);

/// Functional derivatives of E: (-2 phi'' - (q+2) beta1 |phi|^q phi - 2 alpha phi psi,
/// -2 psi'' - (p+2) beta2 psi^(p+1) - alpha |phi|^2), so that
/// dE(phi + eps h, psi)/d eps = Re ∫ g_phi conj(h).
std::pair<ComplexField, RealField> energy_gradient(const ComplexField& phi, const RealField& psi,
                                                   const PhysParams& prm);

/// Minimize E subject to ||phi||^2 = s, ||psi||^2 = t.
///
/// s = 0 pins phi to zero and solves the KdV part alone; t = 0 does the same
/// for psi and needs beta1 > 0. Throws UnattainedInfimum when the infimum is
/// known but not attained (t = 0 with beta1 = 0; s > 0 with beta1 = alpha = 0).
std::pair<SolitaryWavePair, MinimizeReport> minimize_I(
    double s, double t, const PhysParams& prm, const GridPtr& grid,
    const MinimizeOptions& opts = {}, const SolitaryWavePair* warm_start = nullptr);

struct Multipliers {
  double sigma = 0.0;  // NaN when s = 0
  double c = 0.0;      // NaN when t = 0
};

/// sigma = -(1/s) ∫ |phi'|^2 - tau1 |phi|^(q+2) - alpha |phi|^2 psi,
/// c = -(1/t) ∫ psi'^2 - tau2/(p+1) psi^(p+2) - (alpha/2) |phi|^2 psi.
Multipliers multipliers(const ComplexField& phi, const RealField& psi, const PhysParams& prm);
Multipliers multipliers(const SolitaryWavePair& pair, const PhysParams& prm);

struct ElResidual {
  double phi = 0.0;
  double psi = 0.0;
  ComplexField phi_field;
  RealField psi_field;
};

/// L2 norms of -phi'' + sigma phi - tau1 |phi|^q phi - alpha phi psi and
/// -psi'' + c psi - tau2/(p+1) psi^(p+1) - (alpha/2) |phi|^2 with the
/// multipliers above. A zero component has zero residual.
ElResidual el_residual(const ComplexField& phi, const RealField& psi, const PhysParams& prm);
ElResidual el_residual(const SolitaryWavePair& pair, const PhysParams& prm);

/// max|phi - K_sigma * (tau1 |phi|^q phi + alpha phi psi)| with K_sigma the
/// inverse of -d^2/dx^2 + sigma, and the analogue for psi with K_c.
struct FixedPointDefect {
  double phi = 0.0;
  double psi = 0.0;
};
FixedPointDefect fixed_point_defect(const SolitaryWavePair& pair, const PhysParams& prm);

/// ∫ |phi'|^2 - beta1 |phi|^(q+2) - alpha |phi|^2 psi, negative at minimizers with s, t > 0.
double mixed_action(const SolitaryWavePair& pair, const PhysParams& prm);

struct WScanPoint {
  double a = 0.0;
  double value = 0.0;  // I(s, a) + b(a)^2 s
};

struct WSolution {
  double s = 0.0;
  double t = 0.0;
  double a_star = 0.0;
  double b = 0.0;
  ComplexField Phi;
  RealField psi;
  double sigma = 0.0;
  double omega = 0.0;
  double c = 0.0;
  double c_consistency = 0.0;  // |c + 2b|, zero for an exact W-minimizer with a* > 0
  double I_value = 0.0;        // I(s, a*)
  double W_value = 0.0;        // I(s, a*) + b^2 s
  double a_max = 0.0;
  bool boundary_minimum = false;  // a* sits at the scanned a_max
  int solves = 0;
  std::vector<WScanPoint> scan;
  SolitaryWavePair reduced;  // the I(s, a*) minimizer phi~, psi
};

/// W(s, t) = inf_{a >= 0} I(s, a) + ((t - a)/s)^2 s, by a 33-node scan and
/// golden-section refinement, reconstructing Phi = exp(-i b x) phi~. Scan
/// nodes whose minimizer leaks out of `grid` are valued on a doubled box; the
/// minimizing node itself must decay inside `grid` (else BoundaryLeak).
WSolution minimize_W(double s, double t, const PhysParams& prm, const GridPtr& grid,
                     const MinimizeOptions& opts = {});

/// I(s, t) if attained, else the known infimum (0 for t = 0, beta1 = 0;
/// I(0, t) for s > 0, beta1 = alpha = 0).
double I_value(double s, double t, const PhysParams& prm, const GridPtr& grid,
               const MinimizeOptions& opts = {});

struct SubadditivityResult {
  double s1 = 0, t1 = 0, s2 = 0, t2 = 0;
  double I1 = 0, I2 = 0, I12 = 0;
  double margin = 0;  // I1 + I2 - I12
  double L = 0;       // half-length of the box actually used
};

void to_json(nlohmann::json& j, const SubadditivityResult& r);

/// Throws ValidationError unless s1+s2 > 0, t1+t2 > 0, s1+t1 > 0, s2+t2 > 0 and all >= 0.
void check_subadditivity_preconditions(double s1, double t1, double s2, double t2);

/// Margin I(s1,t1) + I(s2,t2) - I(s1+s2, t1+t2). The box is doubled at fixed
/// dx (up to three times) when a minimizer does not decay inside `grid`.
SubadditivityResult subadditivity_probe(double s1, double t1, double s2, double t2,
                                        const PhysParams& prm, const GridPtr& grid,
                                        const MinimizeOptions& opts = {});

}  // namespace nlskdv
