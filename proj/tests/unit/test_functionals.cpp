#include <doctest.h>

#include <cmath>
#include <random>

#include "nlskdv/functionals.hpp"
#include "nlskdv/grid.hpp"
#include "nlskdv/params.hpp"

using namespace nlskdv;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

// Integrals over the line, from antiderivatives of sech^k tanh^m:
//   ∫ sech^2 = 2, ∫ sech^4 = 4/3, ∫ sech^6 = 16/15, ∫ sech^4 tanh^2 = 4/15.
constexpr double kSech2 = 2.0, kSech4 = 4.0 / 3.0, kSech6 = 16.0 / 15.0;

ComplexField smooth_random(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  const double a = u(rng), b = u(rng), c = u(rng), w = 1.0 + 0.5 * u(rng);
  return sample_complex(g, [=](double x) {
    return cdouble(1 + 0.3 * a * x, b + 0.2 * c * x * x) * std::exp(-x * x / (2 * w * w));
  });
}

RealField smooth_random_real(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  const double a = u(rng), b = u(rng), w = 1.0 + 0.5 * u(rng);
  return sample(g, [=](double x) { return (1 + a * x + b * x * x) * std::exp(-x * x / (2 * w * w)); });
}

}  // namespace

TEST_CASE("derived constants") {
  const PhysParams prm(0.5, 1.0, 3.0, Rational{1, 1}, 2.0);
  CHECK(prm.beta1() == 2.0 * 1.0 / (2.0 + 2.0));
  CHECK(prm.beta2() == 2.0 * 3.0 / (2.0 * 3.0));
  CHECK_THROWS(PhysParams(1, 1, 1, Rational::parse("1/2"), 1));
  CHECK_THROWS(PhysParams(1, 1, 1, Rational{1, 1}, 4.0));
  CHECK_THROWS(PhysParams(-1, 1, 1, Rational{1, 1}, 1.0));
}

TEST_CASE("signed fractional powers") {
  CHECK(signed_pow(-8.0, Rational{1, 3}) == doctest::Approx(-2.0));
  CHECK(signed_pow(-8.0, Rational{2, 3}) == doctest::Approx(4.0));
  CHECK(signed_pow(-2.0, Rational{3, 1}) == doctest::Approx(-8.0));
  CHECK(signed_pow(-2.0, Rational{2, 1}) == doctest::Approx(4.0));
  CHECK(signed_pow(2.0, Rational{7, 5}) == doctest::Approx(std::pow(2.0, 1.4)));
}

TEST_CASE("energy of the KdV profile sech^2(x/2)") {
  const auto g = make_grid(40, 1024);
  const PhysParams prm(0.0, 0.0, 3.0, Rational{1, 1}, 1.0);  // beta2 = 1
  const auto v = sample(g, [](double x) { return std::pow(sech(x / 2), 2); });
  // v_x^2 = sech^4 tanh^2 (x/2): 2 * 4/15; v^3 = sech^6(x/2): 2 * 16/15.
  const double expect = 2.0 * (kSech4 - kSech6) - 2.0 * kSech6;  // = -8/5
  CHECK(energy(ComplexField(g), v, prm) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(kdv_action(v, prm) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(energy(ComplexField(g), RealField(g), prm) == 0.0);
}

TEST_CASE("NLS action of sqrt(2) sech") {
  const auto g = make_grid(40, 1024);
  const PhysParams prm(0.0, 1.0, 1.0, Rational{1, 1}, 2.0);  // beta1 = 1/2
  const auto f = ComplexField(sample(g, [](double x) { return std::sqrt(2.0) * sech(x); }));
  const double expect = 2.0 * (kSech2 - kSech4) - 0.5 * 4.0 * kSech4;  // 4/3 - 8/3
  CHECK(nls_action(f, prm) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(nls_action(f, prm) == doctest::Approx(energy(f, RealField(g), prm)).epsilon(1e-14));
  CHECK(charge(f) == doctest::Approx(2.0 * kSech2).epsilon(1e-12));
}

TEST_CASE("charge and momentum identities") {
  const auto g = make_grid(40, 1024);
  std::mt19937_64 rng(3);
  const auto u = smooth_random(g, rng);
  CHECK(charge(cdouble(2, 1) * u) == doctest::Approx(5.0 * charge(u)).epsilon(1e-13));
  CHECK(charge(ComplexField(g)) == 0.0);

  const auto v = sample(g, [](double x) { return std::pow(sech(x / 2), 2); });
  CHECK(momentum(ComplexField(g), v) == doctest::Approx(2.0 * kSech4).epsilon(1e-12));  // 8/3
  const auto h = smooth_random_real(g, rng);
  CHECK(momentum(ComplexField(h), v) == doctest::Approx(norm_sq(v)).epsilon(1e-13));
}

TEST_CASE("phase modulation identities") {
  const auto g = make_grid(40, 1024);
  const PhysParams prm(0.7, 1.0, 1.5, Rational{1, 1}, 1.0);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = smooth_random_real(g, rng);
    auto v = smooth_random_real(g, rng);
    const double k = g->wavenumbers()[3 + trial], theta = 0.4 * trial;
    const auto f = sample_complex(g, [&](double x) { return std::polar(1.0, k * x + theta); });
    ComplexField fh(g);
    for (int j = 0; j < g->size(); ++j) fh[j] = f[j] * h[j];
    const ComplexField hc(h);
    // E(f, g) = E(h, g) + k^2 H(h) and G(f, g) = G(h, g) - k H(h)
    const double e_expect = energy(hc, v, prm) + k * k * charge(hc);
    CHECK(energy(fh, v, prm) == doctest::Approx(e_expect).epsilon(1e-10));
    const double g_expect = momentum(hc, v) - k * charge(hc);
    CHECK(momentum(fh, v) == doctest::Approx(g_expect).epsilon(1e-10));
  }
}

TEST_CASE("scaling identity") {
  const auto g = make_grid(80, 2048);
  for (double q : {1.0, 2.0, 3.0}) {
    const PhysParams prm(0.8, 1.2, 0.9, Rational{1, 1}, q);
    auto f = [](double x) { return cdouble(sech(x), 0.3 * sech(x) * std::tanh(x)); };
    auto gg = [](double x) { return 0.7 * std::pow(sech(x / 1.3), 2); };
    const auto F = sample_complex(g, f);
    const auto G = sample(g, gg);
    const auto T = energy_terms(F, G, prm);
    const double th = 0.25;
    const auto Ft = sample_complex(g, [&](double x) { return std::sqrt(th) * f(th * x); });
    const auto Gt = sample(g, [&](double x) { return std::sqrt(th) * gg(th * x); });
    const double p = prm.p_value();
    const double expect = th * th * (T.kinetic_u + T.kinetic_v) -
                          std::pow(th, q / 2) * prm.beta1() * T.nls_power -
                          std::pow(th, p / 2) * prm.beta2() * T.kdv_power -
                          std::sqrt(th) * prm.alpha() * T.coupling;
    CHECK(energy(Ft, Gt, prm) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("modulus does not raise the energy") {
  const auto g = make_grid(40, 512);
  const PhysParams prm(1.0, 1.0, 1.0, Rational{1, 1}, 1.0);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = smooth_random(g, rng);
    // A sign-changing v would put kinks into |v|; keep v positive and let the phase of f do the work.
    const auto v0 = smooth_random_real(g, rng);
    RealField v(g);
    for (int j = 0; j < g->size(); ++j) v[j] = v0[j] * v0[j];
    const auto terms = energy_terms(f, v, prm);
    const double lhs = energy(ComplexField(f.modulus()), v, prm);
    CHECK(lhs <= energy(f, v, prm) + 1e-10 * terms.magnitude(prm));
  }
}

TEST_CASE("Gagliardo-Nirenberg ratio collapses under scaling") {
  const auto g = make_grid(80, 4096);
  std::mt19937_64 rng(9);
  const double q = 2.0;
  double c_fit = 0.0;
  std::vector<double> ratios;
  for (int i = 0; i < 200; ++i) {
    std::uniform_real_distribution<double> u(-1, 1);
    const double a = u(rng), b = u(rng), w = 1.5 + u(rng);
    auto prof = [=](double x) { return cdouble(1 + 0.5 * a * x, 0.5 * b) * std::exp(-x * x / (2 * w * w)); };
    auto ratio = [&](double th) {
      const auto f = sample_complex(g, [&](double x) { return std::sqrt(th) * prof(th * x); });
      RealField m = f.modulus();
      double lp = 0;
      for (double v : m.values) lp += std::pow(v, q + 2);
      lp *= g->dx();
      const double kin = norm_sq(deriv(f, 1)), mass = norm_sq(f);
      return lp / (std::pow(kin, q / 4) * std::pow(mass, (q + 4) / 4));
    };
    const double r1 = ratio(1.0), r2 = ratio(1.6);
    CHECK(r2 == doctest::Approx(r1).epsilon(1e-8));  // scale invariant
    ratios.push_back(r1);
    c_fit = std::max(c_fit, r1);
  }
  // One constant bounds the whole sample, and the sharp value for q = 2
  // (ground state ratio 1/sqrt(3) * ...) is not exceeded by more than roundoff.
  const double sech_ratio = [&] {
    const auto f = sample_complex(g, [](double x) { return cdouble(sech(x), 0); });
    double lp = 0;
    for (const auto& z : f.values) lp += std::pow(std::abs(z), q + 2);
    lp *= g->dx();
    return lp / (std::pow(norm_sq(deriv(f, 1)), q / 4) * std::pow(norm_sq(f), (q + 4) / 4));
  }();
  for (double r : ratios) CHECK(r <= c_fit);
  CHECK(c_fit <= sech_ratio * (1 + 1e-9));
}
