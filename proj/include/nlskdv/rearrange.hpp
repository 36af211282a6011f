#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nlskdv/grid.hpp"
#include "nlskdv/params.hpp"

namespace nlskdv {

/// Symmetric decreasing rearrangement of a raw sequence about `center`.
///
/// The largest value lands on `center`, the next on center+1, then center-1,
/// center+2, center-2, ... (right first), wrapping periodically. Equal values
/// are interchangeable, so the output does not depend on their input order.
std::vector<double> rearrange_values(std::span<const double> values, int center);

/// Grid version centred at x = 0. Rejects negative samples.
RealField decreasing_rearrangement(const RealField& w);

/// Forward-difference Dirichlet form sum (f_{j+1} - f_j)^2 / dx on the periodic grid.
double fd_kinetic(const RealField& f);
/// Spectral Dirichlet form ∫ f_x^2 dx, the one used by energy().
double spectral_kinetic(const RealField& f);

/// Outcome of a tolerance-policed inequality.
enum class CheckStatus { pass, tolerance_limited, fail };
const char* to_string(CheckStatus s);

/// Classify `gap` (non-negative when the inequality holds) against roundoff
/// and the discretization tolerance.
CheckStatus classify_gap(double gap, double roundoff, double tol);

struct RearrangeReport {
  std::vector<double> lp_exponents;
  std::vector<bool> lp_preserved;
  bool multiset_preserved = false;
  /// ∫ f* g* - ∫ f g, non-negative exactly.
  double hardy_littlewood_gap = 0.0;
  /// ∫ (f*)^2 g* - ∫ f^2 g, non-negative exactly.
  double mixed_gap = 0.0;
  /// min over f, g of ||w'||^2 - ||(w*)'||^2 with forward differences.
  double polya_szego_gap = 0.0;
  /// Same gap measured with spectral derivatives.
  double polya_szego_gap_spectral = 0.0;
  double tol_ps = 0.0;
  CheckStatus polya_szego_status = CheckStatus::pass;
  CheckStatus polya_szego_spectral_status = CheckStatus::pass;
  double garrisi_lhs = 0.0;
  double garrisi_rhs = 0.0;
  CheckStatus garrisi_status = CheckStatus::pass;

  bool passed() const;
};

void to_json(nlohmann::json& j, const RearrangeReport& r);

/// Discretization tolerance C*dx*scale for the Dirichlet-form inequalities.
double polya_szego_tolerance(const Grid1D& grid, double scale);

RearrangeReport verify_rearrangement_inequalities(const RealField& f, const RealField& g);

/// Build w = u(. + x1) + v(. + x2) with x1 = -x2 = separation/2 rounded to the
/// grid, rearrange, and compare ||(w*)'||^2 with
/// ||w'||^2 - (3/4) min(||u'||^2, ||v'||^2).
RearrangeReport garrisi_check(const RealField& u, const RealField& v, double separation);

/// E(f,g) - E(f*,g*) for non-negative f, g, with the spectral energy and with
/// the forward-difference kinetic terms.
struct EnergyDrop {
  double spectral = 0.0;
  double finite_difference = 0.0;
  double scale = 0.0;
};

EnergyDrop rearrangement_energy_drop(const RealField& f, const RealField& g, const PhysParams& prm);

/// C-infinity bump A exp(1 - 1/(1 - (x/R)^2)) on |x| < R, zero outside.
RealField smooth_bump(const GridPtr& grid, double amplitude, double radius, double center = 0.0);

}  // namespace nlskdv
