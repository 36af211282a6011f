#pragma once

#include "nlskdv/grid.hpp"
#include "nlskdv/params.hpp"

namespace nlskdv {

/// x -> A sech^(2/power)(sqrt(lambda) * power * x / 2) with A = (lambda/beta)^(1/power).
///
/// With power = p, beta = beta2 this is the KdV ground state g0; with
/// power = q, beta = beta1 it is the NLS ground state f0. Both solve
/// -2 w'' - (power+2) beta w^(power+1) = -2 lambda w.
struct SechProfile {
  double power = 1.0;
  double beta = 1.0;
  double lambda = 1.0;

  double amplitude() const;
  double operator()(double x) const;
  RealField sample(const GridPtr& grid) const;

  /// Recover lambda from a sampled profile through its peak value at x = 0.
  static double fit_lambda(const RealField& profile, double power, double beta);
};

/// Squared grid norm of the profile with the given lambda.
double profile_mass(double lambda, double power, double beta, const Grid1D& grid);

/// lambda > 0 with profile_mass(lambda) == target, found by bracketing on
/// [1e-12, 1e12] followed by safeguarded secant steps in log(lambda).
double lambda_for_mass(double target, double power, double beta, const Grid1D& grid);

/// Decoupled KdV ground state with squared L2 norm t_mass.
RealField kdv_ground(double t_mass, const PhysParams& prm, const GridPtr& grid);
SechProfile kdv_ground_profile(double t_mass, const PhysParams& prm, const Grid1D& grid);

/// Decoupled NLS ground state with squared L2 norm s_mass; requires beta1 > 0.
RealField nls_ground(double s_mass, const PhysParams& prm, const GridPtr& grid);
SechProfile nls_ground_profile(double s_mass, const PhysParams& prm, const Grid1D& grid);

}  // namespace nlskdv
