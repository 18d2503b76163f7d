#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "simplexwalk/beta_math.hpp"

using namespace simplexwalk;

TEST_CASE("beta density values")
{
  CHECK(beta_density(IntervalBeta{1.0, {0.0, 1.0}}, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta_density(IntervalBeta{2.0, {0.0, 1.0}}, 0.5) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(beta_density(IntervalBeta{2.0, {2.0, 4.0}}, 3.0) == doctest::Approx(0.75).epsilon(1e-14));

  CHECK(beta_density(IntervalBeta{2.0, {0.0, 1.0}}, 1.5) == 0.0);
  CHECK(beta_density(IntervalBeta{2.0, {0.0, 1.0}}, 0.0) == 0.0);
  CHECK(beta_density(IntervalBeta{1.0, {0.0, 2.0}}, 2.0) == 0.5);
  CHECK(std::isinf(beta_density(IntervalBeta{0.5, {0.0, 1.0}}, 0.0)));
  CHECK_THROWS_AS(beta_density(IntervalBeta{2.0, {1.0, 1.0}}, 1.0), SimplexError);

  for (double x : {0.01, 0.2, 0.77, 0.999}) {
    for (double a : {0.5, 1.0, 2.5, 7.0}) {
      CHECK(beta_density(IntervalBeta{a, {-1.0, 3.0}}, x) ==
            doctest::Approx(oracle::beta_pdf(a, -1.0, 3.0, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("beta density integrates to one")
{
  Stream rng(3);
  for (double a : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    for (int i = 0; i < 10; ++i) {
      const double lo = 10 * rng.uniform() - 5;
      const double hi = lo + 0.01 + 5 * rng.uniform();
      const IntervalBeta d{a, {lo, hi}};
      const auto r = integrate_adaptive<double>([&](double x) { return beta_density(d, x); }, {lo, hi}, 1e-12);
      CHECK(std::abs(r.value - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("sample_interval_beta")
{
  Stream rng(4);
  for (int i = 0; i < 100; ++i) CHECK(sample_interval_beta(IntervalBeta{2.0, {2.0, 2.0}}, rng) == 2.0);

  std::vector<double> u;
  for (int i = 0; i < 100000; ++i) u.push_back(sample_interval_beta(IntervalBeta{1.0, {0.0, 1.0}}, rng));
  const auto su = oracle::summarize(u);
  CHECK(std::abs(su.mean - 0.5) < 4 * su.se);

  // Variance of Beta(3, 3) on [0, 2]: closed form and quadrature agree.
  const IntervalBeta d{3.0, {0.0, 2.0}};
  const double closed = 4 * 9.0 / (36.0 * 7.0);
  const double quad = integrate_adaptive<double>(
                          [&](double x) { return (x - 1) * (x - 1) * beta_density(d, x); }, {0.0, 2.0}, 1e-13)
                          .value;
  CHECK(quad == doctest::Approx(closed).epsilon(1e-10));
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) {
    const double x = sample_interval_beta(d, rng);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 2.0);
    v.push_back(x);
  }
  const auto sv = oracle::summarize(v);
  CHECK(std::abs(sv.variance - closed) < 4 * sv.variance_se);
}

TEST_CASE("beta TV spot values")
{
  for (double a : {0.5, 1.0, 2.0, 3.7}) {
    CHECK(beta_interval_tv(a, Interval{0.3, 1.9}, Interval{0.3, 1.9}) == 0.0);
  }
  CHECK(beta_interval_tv(1.0, Interval{0.0, 2.0}, Interval{1.0, 2.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(beta_interval_tv(2.0, Interval{2.0, 2.0}, Interval{2.0, 2.0}) == 0.0);
  CHECK(beta_interval_tv(2.0, Interval{2.0, 2.0}, Interval{2.0, 3.0}) == 1.0);
  CHECK(beta_interval_tv(2.0, Interval{0.0, 1.0}, Interval{5.0, 6.0}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(beta_interval_tv(2.0, Interval{0.0, 1.0}, Interval{0.5, 1.5}, 1e-3), SimplexError);
  CHECK_THROWS_AS(beta_interval_tv(2.0, Interval{0.0, 1.0}, Interval{0.5, 1.5}, 0.0), SimplexError);
}

TEST_CASE("beta TV against a Riemann sum on 1e7 panels")
{
  const double q = beta_interval_tv(2.0, Interval{0.0, 1.0}, Interval{0.5, 1.5});
  const double r = oracle::riemann_tv(2.0, 0.0, 1.0, 0.5, 1.5, 10'000'000);
  CHECK(std::abs(q - r) < 1e-6);

  const double q3 = beta_interval_tv(3.0, Interval{0.0, 1.0}, Interval{0.1, 2.0});
  const double r3 = oracle::riemann_tv(3.0, 0.0, 1.0, 0.1, 2.0, 10'000'000);
  CHECK(std::abs(q3 - r3) < 1e-6);
}

TEST_CASE("alpha = 1 quadrature matches the closed form")
{
  Stream rng(12);
  for (int i = 0; i < 100; ++i) {
    const double l1 = rng.uniform(), l2 = rng.uniform();
    const Interval I1{l1, l1 + 0.05 + rng.uniform()}, I2{l2, l2 + 0.05 + rng.uniform()};
    const double closed = 1.0 - overlap(I1, I2) / std::max(I1.length(), I2.length());
    CHECK(std::abs(beta_interval_tv_quadrature(1.0, I1, I2, 1e-10).value - closed) < 1e-6);
  }
}

TEST_CASE("beta TV symmetry and affine invariance")
{
  Stream rng(13);
  for (double a : {0.5, 0.75, 1.5, 2.0, 3.0}) {
    for (int i = 0; i < 10; ++i) {
      const double l1 = rng.uniform(), l2 = rng.uniform();
      const Interval I1{l1, l1 + 0.1 + rng.uniform()}, I2{l2, l2 + 0.1 + rng.uniform()};
      const double tv = beta_interval_tv(a, I1, I2, 1e-10);
      CHECK(std::abs(tv - beta_interval_tv(a, I2, I1, 1e-10)) < 2e-9);
      const double s = 0.2 + 5 * rng.uniform(), c = 10 * rng.uniform() - 5;
      const Interval J1{s * I1.lo + c, s * I1.hi + c}, J2{s * I2.lo + c, s * I2.hi + c};
      CHECK(std::abs(tv - beta_interval_tv(a, J1, J2, 1e-10)) < 2e-9);
      CHECK(tv >= 0.0);
      CHECK(tv <= 1.0);
    }
  }
}

TEST_CASE("alpha < 1 quadrature handles the endpoint singularity")
{
  // The two laws split [0, 2] at 1 with disjoint supports: TV is exactly 1.
  CHECK(beta_interval_tv(0.5, Interval{0.0, 1.0}, Interval{1.0, 2.0}, 1e-10) == doctest::Approx(1.0).epsilon(1e-9));
  // Nested intervals: TV from I2 to I1 is the I2 mass outside I1 plus the positive part inside.
  const double tv = beta_interval_tv(0.5, Interval{0.0, 1.0}, Interval{0.0, 1.0 + 1e-6}, 1e-10);
  CHECK(tv > 0.0);
  CHECK(tv < 0.01);
}

TEST_CASE("sticking ratio Q")
{
  CHECK(sticking_ratio_Q(0.8, 0.3, 0.2) == doctest::Approx(0.25));
  CHECK(sticking_ratio_Q(0.3, 0.8, 0.2) == doctest::Approx(0.25));
  CHECK(sticking_ratio_Q(1.0, 1.0, 5.0) == 1.0);
  CHECK(sticking_ratio_Q(1.0, 1.0, 0.0) == 0.0);
  CHECK(sticking_ratio_Q(0.0, 0.0, 0.5) == 1.0);
}

TEST_CASE("ordered pair grid")
{
  const auto grid = ordered_interval_pairs();
  CHECK(grid.size() == 62);
  for (const auto& [I1, I2] : grid) {
    CHECK(I1.lo <= I2.lo);
    CHECK(I1.hi <= I2.hi);
    CHECK_FALSE(I1 == I2);
  }
  CHECK(displacement_ratio(Interval{0, 1}, Interval{0.5, 1.5}) == 0.5);
}
