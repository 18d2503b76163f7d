#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "simplexwalk/estimators.hpp"
#include "simplexwalk/spectral.hpp"

using namespace simplexwalk;

TEST_CASE("eigen statistic values")
{
  for (int j = 1; j < 9; ++j) CHECK(std::abs(eigen_stat(j, Configuration::linear(9))) < 1e-13);
  CHECK(eigen_stat(1, Configuration::top(2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eigen_stat(1, Configuration::top(4)) == doctest::Approx(2 + 2 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(eigen_stat(0, Configuration::top(4)), SimplexError);
  CHECK_THROWS_AS(eigen_stat(4, Configuration::top(4)), SimplexError);
}

TEST_CASE("eigenvalues")
{
  CHECK(spectral_gap(2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spectral_gap(4) == doctest::Approx(1 - std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(eigenvalue(2, 4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(eigenvalue(4, 4), SimplexError);
  for (int n : {2, 3, 10, 257}) {
    const auto l = eigenvalues(n);
    CHECK(l[0] > 0.0);
    CHECK(l[n - 2] < 2.0);
    for (int j = 1; j < n - 1; ++j) CHECK(l[j] > l[j - 1]);
  }
}

TEST_CASE("sine basis is orthonormal")
{
  for (int n : {2, 3, 8, 64, 1024}) {
    const auto phi = sine_basis(n);
    const Eigen::MatrixXd gram = phi.transpose() * phi;
    CAPTURE(n);
    CHECK((gram - Eigen::MatrixXd::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("heat mean curve")
{
  Stream rng(1);
  const auto x0 = sample_equilibrium(10, 1.0, rng);
  const auto at0 = heat_mean_curve(x0, {0.0});
  CHECK((at0.row(0).transpose() - x0.positions()).cwiseAbs().maxCoeff() < 1e-9);

  const double late = 30.0 / spectral_gap(10);
  const auto atlate = heat_mean_curve(Configuration::top(10), {late});
  CHECK((atlate.row(0).transpose() - Configuration::linear(10).positions()).cwiseAbs().maxCoeff() < 1e-9);

  for (double t : {0.1, 1.0, 3.0}) {
    CHECK(heat_mean_curve(Configuration::top(2), {t})(0, 0) == doctest::Approx(1 + std::exp(-t)).epsilon(1e-14));
  }
}

TEST_CASE("heat mean curve agrees with direct ODE integration")
{
  for (int n : {3, 8, 17}) {
    const auto top = Configuration::top(n);
    std::vector<double> a0;
    for (int k = 1; k < n; ++k) a0.push_back(top[k] - k);
    for (double t : {0.5, 4.0, 25.0}) {
      const auto a = oracle::heat_rk4(a0, t, 1e-3);
      const auto m = heat_mean_curve(top, {t});
      for (int k = 1; k < n; ++k) CHECK(std::abs(m(0, k - 1) - k - a[std::size_t(k - 1)]) < 1e-9);
    }
  }
}

TEST_CASE("exact mean profile obeys the 2N exp(-gap t) bound")
{
  for (int n = 2; n <= 64; ++n) {
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(i * 0.1 * n * n);
    const auto m = heat_mean_curve(Configuration::top(n), times);
    const double gap = spectral_gap(n);
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (int k = 1; k < n; ++k) {
        CHECK(m(Eigen::Index(i), k - 1) - k <= 2 * n * std::exp(-gap * times[i]) + 1e-12);
      }
    }
  }
}

TEST_CASE("heat mean curve matches Monte Carlo from both extremes")
{
  const int n = 8;
  const std::uint64_t reps = 4000;
  const std::vector<double> times = {1.0, 5.0, 20.0};
  for (const auto& start : {Configuration::top(n), Configuration::bottom(n)}) {
    const auto exact = heat_mean_curve(start, times);
    const auto mc = coordinate_mean_profile(start, 1.0, times, reps, 77);
    for (Eigen::Index i = 0; i < 3; ++i) {
      for (Eigen::Index k = 0; k < n - 1; ++k) {
        // se floor: one replica moving by N shifts the mean by N / reps.
        const double se = std::max(mc.standard_error(i, k), double(n) / double(reps));
        CHECK(std::abs(mc.mean(i, k) - exact(i, k)) < 4 * se);
      }
    }
  }
}

TEST_CASE("eigenfunctions decay at their eigenvalues")
{
  const int n = 8;
  const std::vector<double> times = {0.0, 2.0, 6.0, 15.0};
  for (double alpha : {1.0, 2.0}) {
    Stream rng{std::uint64_t(alpha)};
    const auto x0 = sample_pinned_equilibrium(3, n, alpha, rng);
    const auto p = eigen_decay_profile(x0, alpha, {1, 2, 3}, times, 4000, 5);
    for (int j = 1; j <= 3; ++j) {
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double exact = eigen_stat(j, x0) * std::exp(-eigenvalue(j, n) * times[i]);
        const double se = std::max(p.standard_error(Eigen::Index(i), j - 1), 1e-9);
        CAPTURE(alpha);
        CAPTURE(j);
        CHECK(std::abs(p.mean(Eigen::Index(i), j - 1) - exact) < 4 * se);
      }
    }
  }
}

TEST_CASE("mean-field gap")
{
  CHECK(meanfield_gap(2, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(meanfield_gap(8, 1.0) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(meanfield_gap(3, 2.0) == doctest::Approx(7.0 / 15.0).epsilon(1e-15));
  CHECK(meanfield_stat(Eigen::Vector3d(1, 2, 3)) == 14.0);
  CHECK_THROWS_AS(meanfield_gap(1, 1.0), SimplexError);
}

TEST_CASE("fit_decay_rate")
{
  std::vector<double> t, m, se;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(i);
    m.push_back(std::exp(-0.3 * i));
    se.push_back(0.0);
  }
  const auto exact = fit_decay_rate(t, m, se);
  CHECK(std::abs(exact.rate - 0.3) < 1e-12);
  CHECK(exact.points == 11);

  const auto flat = fit_decay_rate(t, std::vector<double>(11, 2.5), se);
  CHECK(std::abs(flat.rate) < 1e-12);

  Stream rng(21);
  std::vector<double> noisy, noisy_se;
  for (int i = 0; i <= 10; ++i) {
    const double v = std::exp(-0.1 * i);
    // Normal noise from a Box-Muller pair.
    const double z = std::sqrt(-2 * std::log(1 - rng.uniform())) * std::cos(2 * std::numbers::pi * rng.uniform());
    noisy.push_back(v * (1 + 0.01 * z));
    noisy_se.push_back(0.01 * v);
  }
  const auto fit = fit_decay_rate(t, noisy, noisy_se);
  CHECK(std::abs(fit.rate - 0.1) < 3 * fit.standard_error);
  CHECK(fit.standard_error > 0);

  // Truncation: the signal drowns after the third point.
  std::vector<double> tm = {1.0, 0.5, 0.25, 0.01, 0.2};
  std::vector<double> ts = {0.01, 0.01, 0.01, 0.01, 0.01};
  const auto cut = fit_decay_rate({0, 1, 2, 3, 4}, tm, ts);
  CHECK(cut.points == 3);
  CHECK(cut.window_end == 2.0);
  CHECK(cut.rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(fit_decay_rate({0, 1, 2}, {1.0, 0.001, 0.001}, {0.01, 0.01, 0.01}), SimplexError);
}
