#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlskdv/functionals.hpp"
#include "nlskdv/grid.hpp"
#include "nlskdv/minimize.hpp"
#include "nlskdv/params.hpp"

namespace nlskdv {

/// (u, v) at one time for i u_t + u_xx + tau1 |u|^q u = -alpha u v,
/// v_t + v_xxx + tau2 v^p v_x = -(alpha/2) (|u|^2)_x.
struct EvolveState {
  ComplexField u;
  RealField v;
  double time = 0.0;
  PhysParams prm;
};

/// u = exp(i c x / 2) phi, v = psi: the t = 0 slice of the travelling wave
/// exp(i omega t) exp(i c (x - ct)/2) phi(x - ct), psi(x - ct).
/// Requires omega = sigma + c^2/4 to within 1e-8 (1 + |omega|).
EvolveState solitary_initial(const SolitaryWavePair& pair, double c, double omega,
                             const PhysParams& prm);
/// Same, with the pair's own c and omega = sigma + c^2/4. A psi-free pair
/// (t = 0) travels with c = 0.
EvolveState solitary_initial(const SolitaryWavePair& pair, const PhysParams& prm);

/// Step size bound for the explicit nonlinear part on this state:
/// 1.4 / (rate of the dealiased nonlinear terms). step() refuses dt above twice this.
double max_stable_dt(const EvolveState& state);

/// Integrating-factor RK4 in Fourier space with the dispersive symbols
/// exp(-i k^2 dt) (u) and exp(i k^3 dt) (v) applied exactly and 2/3-rule
/// dealiasing of every product. dt may be negative (backward in time).
class Integrator {
 public:
  Integrator(const GridPtr& grid, const PhysParams& prm, double dt);

  double dt() const noexcept { return dt_; }
  /// Advance the spectra (unnormalized DFTs of u and v) by one step.
  void step(std::vector<cdouble>& uh, std::vector<cdouble>& vh) const;
  /// Dealiased spectra of a state, the form step() works on.
  void load(const EvolveState& s, std::vector<cdouble>& uh, std::vector<cdouble>& vh) const;
  void store(const std::vector<cdouble>& uh, const std::vector<cdouble>& vh, EvolveState& s) const;

 private:
  void rhs(const std::vector<cdouble>& uh, const std::vector<cdouble>& vh,
           std::vector<cdouble>& nu, std::vector<cdouble>& nv) const;

  GridPtr grid_;
  PhysParams prm_;
  double dt_;
  std::vector<double> mask_;
  std::vector<cdouble> dx_symbol_;  // -i k, Nyquist removed
  std::vector<cdouble> eu_half_, eu_full_, ev_half_, ev_full_;
};

/// One step; throws ValidationError for dt outside (0, 2 max_stable_dt] and
/// NumericalError on a non-finite result.
EvolveState step(const EvolveState& state, double dt);

/// A symmetry orbit {(exp(i theta) Phi(. - y), psi(. - y))} with Phi = exp(i c x/2) phi.
class ReferenceOrbit {
 public:
  explicit ReferenceOrbit(const SolitaryWavePair& pair);
  ReferenceOrbit(const ComplexField& Phi, const RealField& psi);

  const ComplexField& Phi() const noexcept { return Phi_; }
  const RealField& psi() const noexcept { return psi_; }
  /// Y-norm of the reference pair, sqrt(||Phi||_{H1}^2 + ||psi||_{H1}^2).
  double y_norm() const;

  struct Fit {
    double distance = 0.0;
    double shift = 0.0;
    double phase = 0.0;
  };
  /// Minimize over shift y (FFT cross-correlation, then Newton) and phase theta (closed form).
  Fit fit(const ComplexField& u, const RealField& v) const;

 private:
  ComplexField Phi_;
  RealField psi_;
  std::vector<cdouble> Phi_hat_, psi_hat_;
  std::vector<double> weight_;  // 1 + k^2
};

double orbital_distance(const EvolveState& state, const ReferenceOrbit& reference);
double orbital_distance(const EvolveState& state, const SolitaryWavePair& reference);

/// sqrt(||u||_{H1}^2 + ||v||_{H1}^2)
double y_norm(const ComplexField& u, const RealField& v);

struct DriftStats {
  double H = 0.0;  // max_t |H(t) - H(0)| / |H(0)|
  double G = 0.0;
  double E = 0.0;
};

struct EvolveTrace {
  std::vector<double> times;
  std::vector<ConservedTriple> conserved;
  std::vector<double> distance;  // empty without a reference
  DriftStats drift;
  double dt = 0.0;
  long steps = 0;
  std::string status = "ok";  // "ok" or "blow-up"
  std::string message;
  bool outside_theorem = false;  // p >= 4/3
  EvolveState final_state;
  double max_distance() const;
};

/// Step from state to time state.time + T, sampling every `sample_every` steps
/// and at the end. On blow-up the trace is kept up to the last good sample and
/// status is "blow-up".
EvolveTrace evolve(const EvolveState& state, double T, double dt, int sample_every,
                   const ReferenceOrbit* reference = nullptr);

/// Add a smooth random perturbation with Y-norm eps_abs (Gaussian spectral
/// envelope of width k_width times a Gaussian window of width L/4, seeded),
/// then rescale u so H(u) is unchanged.
EvolveState perturb(const EvolveState& state, double eps_abs, std::uint64_t seed,
                    double k_width = 2.0);

}  // namespace nlskdv
