#include <doctest.h>

#include <cmath>

#include "nlskdv/error.hpp"
#include "nlskdv/evolve.hpp"
#include "nlskdv/exact.hpp"
#include "nlskdv/functionals.hpp"
#include "nlskdv/minimize.hpp"

using namespace nlskdv;

namespace {

EvolveState bump_state(const GridPtr& g, const PhysParams& prm) {
  EvolveState s;
  s.u = sample_complex(g, [](double x) {
    return cdouble(std::cos(0.4 * x), std::sin(0.4 * x)) * 0.8 / std::cosh(x);
  });
  s.v = sample(g, [](double x) { return 0.6 / std::pow(std::cosh(x / 2), 2); });
  s.prm = prm;
  return s;
}

double sup_diff(const EvolveState& a, const EvolveState& b) {
  double m = 0;
  for (int j = 0; j < a.v.size(); ++j) {
    m = std::max(m, std::abs(a.u[j] - b.u[j]));
    m = std::max(m, std::abs(a.v[j] - b.v[j]));
  }
  return m;
}

}  // namespace

TEST_CASE("forward then backward returns to the start") {
  const auto g = make_grid(30, 256);
  const PhysParams prm;
  const auto s0 = bump_state(g, prm);
  const Integrator fwd(g, prm, 1e-3), bwd(g, prm, -1e-3);
  std::vector<cdouble> uh, vh;
  fwd.load(s0, uh, vh);
  EvolveState start = s0;
  fwd.store(uh, vh, start);  // dealiased starting point
  for (int i = 0; i < 500; ++i) fwd.step(uh, vh);
  for (int i = 0; i < 500; ++i) bwd.step(uh, vh);
  EvolveState back = s0;
  bwd.store(uh, vh, back);
  CHECK(sup_diff(back, start) <= 1e-7);
}

TEST_CASE("conserved quantities drift little") {
  const auto g = make_grid(30, 256);
  const auto s0 = bump_state(g, PhysParams());
  const auto tr = evolve(s0, 2.0, 1e-3, 100);
  CHECK(tr.status == "ok");
  CHECK(tr.drift.H <= 1e-8);
  CHECK(tr.drift.G <= 1e-6);
  CHECK(tr.drift.E <= 1e-5);
  CHECK(tr.final_state.time == doctest::Approx(2.0));
}

TEST_CASE("KdV soliton travels at its speed") {
  const auto g = make_grid(40, 512);
  const PhysParams prm(0.0, 0.0, 6.0, Rational{1, 1}, 1.0);
  EvolveState s;
  s.u = ComplexField(g);
  s.v = sample(g, [](double x) { return 0.5 / std::pow(std::cosh(x / 2), 2); });
  s.prm = prm;
  const auto tr = evolve(s, 4.0, 1e-3, 4000);
  const auto exact = sample(g, [](double x) { return 0.5 / std::pow(std::cosh((x - 4.0) / 2), 2); });
  double m = 0;
  for (int j = 0; j < g->size(); ++j) m = std::max(m, std::abs(tr.final_state.v[j] - exact[j]));
  CHECK(m <= 1e-5);
}

TEST_CASE("orbital distance sees through shifts and phases") {
  const auto g = make_grid(40, 512);
  const PhysParams prm;
  const auto [pair, rep] = minimize_I(1.0, 1.0, prm, g);
  const ReferenceOrbit orbit(pair);
  EvolveState s = solitary_initial(pair, prm);
  CHECK(orbital_distance(s, orbit) <= 1e-10);
  s.u = cdouble(std::cos(1.1), std::sin(1.1)) * translate(s.u, 7.3);
  s.v = translate(s.v, 7.3);
  const auto fit = orbit.fit(s.u, s.v);
  CHECK(fit.distance <= 1e-6);
  CHECK(std::abs(fit.shift - 7.3) <= 1e-6);

  SUBCASE("perturbation has the requested size") {
    const double eps = 0.05 * orbit.y_norm();
    const auto p = perturb(solitary_initial(pair, prm), eps, 3);
    CHECK(charge(p.u) == doctest::Approx(charge(pair.phi)).epsilon(1e-12));
    const double d = orbital_distance(p, orbit);
    CHECK(d <= 1.05 * eps);
    CHECK(d >= 0.2 * eps);
  }
  SUBCASE("the solitary wave stays on its orbit") {
    const auto tr = evolve(solitary_initial(pair, prm), 1.0, 1e-3, 250, &orbit);
    CHECK(tr.max_distance() <= 1e-6);
  }
}

TEST_CASE("zero data stays zero") {
  const auto g = make_grid(20, 128);
  EvolveState s;
  s.u = ComplexField(g);
  s.v = RealField(g);
  const auto tr = evolve(s, 0.5, 1e-2, 10);
  CHECK(tr.status == "ok");
  CHECK(norm_sq(tr.final_state.u) == 0.0);
  CHECK(norm_sq(tr.final_state.v) == 0.0);
}

TEST_CASE("step validation") {
  const auto g = make_grid(30, 256);
  const auto s0 = bump_state(g, PhysParams());
  CHECK_THROWS_AS(step(s0, 0.0), ValidationError);
  CHECK_THROWS_AS(step(s0, 100.0 * max_stable_dt(s0)), ValidationError);
  CHECK_THROWS_AS(evolve(s0, 1.0, 0.3, 1), ValidationError);
}
