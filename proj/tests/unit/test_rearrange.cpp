#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nlskdv/error.hpp"
#include "nlskdv/rearrange.hpp"
#include "nlskdv/workflows.hpp"

using namespace nlskdv;

namespace {

double cyclic_dirichlet(const std::vector<double>& a) {
  double s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[(j + 1) % a.size()] - a[j];
    s += d * d;
  }
  return s;
}

RealField two_bumps(const GridPtr& g) {
  return smooth_bump(g, 1.0, 3.0, -10.0) + smooth_bump(g, 0.6, 2.0, 12.0);
}

}  // namespace

TEST_CASE("placement convention") {
  const std::vector<double> w{0, 0, 1, 0, 2};
  const auto r = rearrange_values(w, 2);
  CHECK(r == std::vector<double>{0, 0, 2, 1, 0});
  // right first, then left, alternating
  const auto s = rearrange_values(std::vector<double>{1, 5, 3, 4, 2, 0, 0, 0}, 4);
  CHECK(s == std::vector<double>{0, 0, 1, 3, 5, 4, 2, 0});
}

TEST_CASE("equal values are interchangeable") {
  const std::vector<double> a{1, 2, 2, 3, 0, 1, 3, 0};
  std::vector<double> b = a;
  std::reverse(b.begin(), b.end());
  CHECK(rearrange_values(a, 4) == rearrange_values(b, 4));
}

TEST_CASE("organ-pipe order minimizes the cyclic Dirichlet sum over all permutations") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> a(8);
    for (auto& v : a) v = u(rng);
    const double star = cyclic_dirichlet(rearrange_values(a, 4));
    std::sort(a.begin(), a.end());
    double best = 1e300;
    do {
      best = std::min(best, cyclic_dirichlet(a));
    } while (std::next_permutation(a.begin(), a.end()));
    CHECK(star <= best * (1 + 1e-14));
  }
}

TEST_CASE("rearrangement of grid fields") {
  const auto g = make_grid(40, 512);
  const auto far = smooth_bump(g, 1.3, 4.0, 25.0);
  const auto star = decreasing_rearrangement(far);
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted(star.values) == sorted(far.values));
  CHECK(*std::max_element(star.values.begin(), star.values.end()) == star[g->center_index()]);
  for (int j = 1; j < g->size() / 2; ++j) {
    CHECK(star[g->center_index() + j] <= star[g->center_index() + j - 1]);
    CHECK(star[g->center_index() - j] <= star[g->center_index() - j + 1]);
  }
  RealField neg(g);
  neg[5] = -1e-3;
  CHECK_THROWS_AS(decreasing_rearrangement(neg), ValidationError);
}

TEST_CASE("inequality report on separated bumps and symmetric fields") {
  const auto g = make_grid(40, 1024);
  const auto w = two_bumps(g);
  const auto rep = verify_rearrangement_inequalities(w, w);
  CHECK(rep.multiset_preserved);
  for (bool b : rep.lp_preserved) CHECK(b);
  CHECK(rep.hardy_littlewood_gap >= 0);
  CHECK(rep.polya_szego_gap > 0);
  CHECK(rep.polya_szego_status == CheckStatus::pass);

  const auto s = smooth_bump(g, 1.0, 5.0);
  const auto sym = verify_rearrangement_inequalities(s, s);
  CHECK(std::abs(sym.hardy_littlewood_gap) <= 1e-14);
  CHECK(std::abs(sym.polya_szego_gap) <= 1e-12);
  CHECK(sym.passed());
}

TEST_CASE("Hardy-Littlewood by direct summation on random pairs") {
  const auto g = make_grid(20, 256);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    RealField f(g), h(g);
    for (int j = 0; j < g->size(); ++j) {
      f[j] = u(rng);
      h[j] = u(rng) * u(rng);
    }
    const auto fs = decreasing_rearrangement(f), hs = decreasing_rearrangement(h);
    long double a = 0, b = 0;
    for (int j = 0; j < g->size(); ++j) {
      a += static_cast<long double>(fs[j]) * hs[j];
      b += static_cast<long double>(f[j]) * h[j];
    }
    CHECK(a >= b);
    CHECK(verify_rearrangement_inequalities(f, h).hardy_littlewood_gap >= 0);
  }
}

TEST_CASE("Garrisi two-bump drop") {
  const auto g = make_grid(40, 2048);
  const auto v = smooth_bump(g, 1.0, 4.0);
  SUBCASE("equal bumps") {
    const auto rep = garrisi_check(v, v, 12.0);
    CHECK(rep.garrisi_lhs <= rep.garrisi_rhs);
    CHECK(rep.garrisi_status == CheckStatus::pass);
  }
  SUBCASE("small copy") {
    const auto u = smooth_bump(g, 0.1, 4.0);
    const auto rep = garrisi_check(u, v, 12.0);
    CHECK(rep.garrisi_lhs <= rep.garrisi_rhs);
  }
  SUBCASE("degenerate second bump reduces to Polya-Szego") {
    const auto rep = garrisi_check(v, RealField(g), 12.0);
    CHECK(rep.garrisi_rhs == doctest::Approx(fd_kinetic(v)).epsilon(1e-12));
    CHECK(rep.garrisi_status == CheckStatus::pass);
  }
  CHECK_THROWS_AS(garrisi_check(v, v, 4.0), ValidationError);
  CHECK_THROWS_AS(garrisi_check(smooth_bump(g, 1.0, 4.0, 3.0), v, 12.0), ValidationError);
}

TEST_CASE("Polya-Szego violations shrink under refinement") {
  // Continuum-defined test set, sampled at n and 2n.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    double prev_spec = 1e300;
    for (int n : {128, 256, 512, 1024, 2048}) {
      const auto g = make_grid(40, n);
      const auto f = cli::random_bumps(g, seed);
      const auto rep = verify_rearrangement_inequalities(f, f);
      const double viol_spec = std::max(0.0, -rep.polya_szego_gap_spectral);
      const double viol_fd = std::max(0.0, -rep.polya_szego_gap);
      CHECK(viol_fd == 0.0);
      CHECK(viol_spec <= prev_spec);
      CHECK(rep.polya_szego_spectral_status != CheckStatus::fail);
      prev_spec = viol_spec;
    }
  }
}

TEST_CASE("classification policy") {
  CHECK(classify_gap(0.1, 1e-12, 1e-3) == CheckStatus::pass);
  CHECK(classify_gap(-1e-13, 1e-12, 1e-3) == CheckStatus::pass);
  CHECK(classify_gap(-1e-4, 1e-12, 1e-3) == CheckStatus::tolerance_limited);
  CHECK(classify_gap(-1e-2, 1e-12, 1e-3) == CheckStatus::fail);
}
