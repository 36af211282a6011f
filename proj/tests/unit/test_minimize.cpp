#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nlskdv/error.hpp"
#include "nlskdv/exact.hpp"
#include "nlskdv/functionals.hpp"
#include "nlskdv/minimize.hpp"

using namespace nlskdv;

namespace {

double sup_diff(const RealField& a, const RealField& b) {
  double m = 0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

RealField window_noise(const GridPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const double a = nd(rng), b = nd(rng), k = 0.5 + std::abs(nd(rng));
  return sample(g, [=](double x) {
    return (a * std::cos(k * x) + b * std::sin(k * x)) * std::exp(-x * x / 16);
  });
}

const std::pair<SolitaryWavePair, MinimizeReport>& coupled() {
  static const auto res = minimize_I(1.0, 1.0, PhysParams(), make_grid(40, 1024));
  return res;
}

}  // namespace

TEST_CASE("gradient matches central differences") {
  const auto g = make_grid(40, 512);
  const PhysParams prm(0.7, 1.2, 0.9, Rational::make(5, 3), 1.5);
  const auto phi = sample_complex(g, [](double x) {
    return cdouble(std::cos(0.3 * x), std::sin(0.3 * x)) / std::cosh(x);
  });
  const auto psi = sample(g, [](double x) { return 0.8 / std::pow(std::cosh(x / 1.5), 2); });
  const auto [gphi, gpsi] = energy_gradient(phi, psi, prm);
  std::mt19937_64 rng(11);
  const double eps = 1e-5;
  for (int d = 0; d < 10; ++d) {
    const auto hr = window_noise(g, rng), hi = window_noise(g, rng), k = window_noise(g, rng);
    ComplexField h(g);
    for (int j = 0; j < g->size(); ++j) h[j] = cdouble(hr[j], hi[j]);
    const double fd = (energy(phi + cdouble(eps) * h, psi + eps * k, prm) -
                       energy(phi - cdouble(eps) * h, psi - eps * k, prm)) /
                      (2 * eps);
    const double an = inner(gphi, h) + inner(gpsi, k);
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("decoupled KdV minimizer is the sech^2 wave") {
  const auto g = make_grid(40, 1024);
  const PhysParams prm(0.0, 0.0, 6.0, Rational{1, 1}, 1.0);
  const auto [pair, rep] = minimize_I(0.0, 2.0 / 3.0, prm, g);
  const auto exact = sample(g, [](double x) { return 0.5 / std::pow(std::cosh(x / 2), 2); });
  CHECK(sup_diff(pair.psi, exact) <= 1e-5);
  CHECK(pair.c == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::isnan(multipliers(pair, prm).sigma));
  CHECK(norm_sq(pair.phi) == 0.0);
}

TEST_CASE("decoupled NLS minimizer is the sech wave") {
  const auto g = make_grid(40, 1024);
  const PhysParams prm(0.0, 1.0, 1.0, Rational{1, 1}, 2.0);
  const auto [pair, rep] = minimize_I(4.0, 0.0, prm, g);
  const auto exact = sample(g, [](double x) { return std::sqrt(2.0) / std::cosh(x); });
  CHECK(sup_diff(pair.phi.modulus(), exact) <= 1e-5);
  CHECK(pair.sigma == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.I_value == doctest::Approx(nls_action(ComplexField(exact), prm)).epsilon(1e-8));
}

TEST_CASE("coupled minimizer") {
  const auto& [pair, rep] = coupled();
  const PhysParams prm;
  CHECK(rep.termination == "converged");
  CHECK(pair.el_residual_phi <= 1e-8);
  CHECK(pair.el_residual_psi <= 1e-8);
  CHECK(pair.sigma > 0);
  CHECK(pair.energy_value < 0);
  CHECK(pair.boundary_leak <= 1e-8);
  CHECK(norm_sq(pair.phi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm_sq(pair.psi) == doctest::Approx(1.0).epsilon(1e-12));
  const auto fp = fixed_point_defect(pair, prm);
  CHECK(fp.phi <= 1e-8);
  CHECK(fp.psi <= 1e-8);
  CHECK(mixed_action(pair, prm) < 0);
  // The coupled value lies below both decoupled ones combined.
  const auto g = pair.psi.grid;
  const double decoupled = energy(ComplexField(nls_ground(1.0, prm, g)), RealField(g), prm) +
                           energy(ComplexField(g), kdv_ground(1.0, prm, g), prm);
  CHECK(rep.I_value < decoupled);
  // Energy history is monotone.
  for (std::size_t i = 1; i < rep.energy_history.size(); ++i)
    CHECK(rep.energy_history[i] <= rep.energy_history[i - 1] + 1e-12);
}

TEST_CASE("energy is translation invariant") {
  const auto& pair = coupled().first;
  const PhysParams prm;
  const double e0 = energy(pair.phi, pair.psi, prm);
  const double e1 = energy(translate(pair.phi, 7.3), translate(pair.psi, 7.3), prm);
  CHECK(std::abs(e1 - e0) <= 1e-9);
}

TEST_CASE("unattained infima are reported") {
  const auto g = make_grid(40, 512);
  const PhysParams no_nls(1.0, 0.0, 1.0, Rational{1, 1}, 1.0);
  try {
    (void)minimize_I(1.0, 0.0, no_nls, g);
    FAIL("expected UnattainedInfimum");
  } catch (const UnattainedInfimum& e) {
    CHECK(e.infimum() == 0.0);
  }
  // The reported infimum is the KdV part alone.
  const PhysParams free_phi(0.0, 0.0, 6.0, Rational{1, 1}, 1.0);
  try {
    (void)minimize_I(1.0, 1.0, free_phi, g);
    FAIL("expected UnattainedInfimum");
  } catch (const UnattainedInfimum& e) {
    CHECK(e.infimum() == doctest::Approx(kdv_action(kdv_ground(1.0, free_phi, g), free_phi)).epsilon(1e-8));
  }
  CHECK_THROWS_AS((void)minimize_I(-1.0, 1.0, PhysParams(), g), ValidationError);
  CHECK_THROWS_AS((void)minimize_I(0.0, 0.0, PhysParams(), g), ValidationError);
}

TEST_CASE("W minimizer is consistent") {
  const PhysParams prm;
  const auto g = make_grid(40, 1024);
  const auto w = minimize_W(1.0, 0.5, prm, g);
  CHECK(w.a_star > 0);
  CHECK(w.W_value >= w.I_value);
  CHECK(w.W_value == doctest::Approx(w.I_value + w.b * w.b * w.s).epsilon(1e-12));
  CHECK(energy(w.Phi, w.psi, prm) == doctest::Approx(w.W_value).epsilon(1e-8));
  CHECK(std::abs(charge(w.Phi) - 1.0) <= 1e-10);
  CHECK(std::abs(momentum(w.Phi, w.psi) - 0.5) <= 1e-8);
  CHECK(w.c_consistency <= 1e-3);
  for (const auto& pt : w.scan) CHECK(pt.value >= w.W_value - 1e-9);
}

TEST_CASE("subadditivity preconditions") {
  CHECK_THROWS_AS(check_subadditivity_preconditions(0, 0, 1, 1), ValidationError);
  CHECK_THROWS_AS(check_subadditivity_preconditions(-1, 1, 1, 1), ValidationError);
  CHECK_NOTHROW(check_subadditivity_preconditions(1, 0, 0, 1));
}
