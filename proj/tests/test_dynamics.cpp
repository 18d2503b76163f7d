#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "oracles.hpp"
#include "simplexwalk/dynamics.hpp"
#include "simplexwalk/estimators.hpp"

using namespace simplexwalk;

namespace {

Configuration config(int n, std::vector<double> x)
{
  return Configuration(n, Eigen::Map<Eigen::VectorXd>(x.data(), Eigen::Index(x.size())));
}

std::vector<Observer<Configuration>> all_coordinates(int n)
{
  std::vector<Observer<Configuration>> obs;
  for (int k = 1; k < n; ++k) obs.push_back(observers::coordinate(k));
  return obs;
}

}  // namespace

TEST_CASE("next_event clock, site and mark")
{
  Stream rng(1);
  std::vector<double> waits, marks;
  std::vector<long> sites(3, 0);
  double clock = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto ev = next_event(4, 1.0, clock, rng);
    REQUIRE(ev.time > clock);
    waits.push_back(ev.time - clock);
    marks.push_back(ev.u);
    sites[std::size_t(ev.site - 1)]++;
    clock = ev.time;
  }
  const auto w = oracle::summarize(waits);
  CHECK(std::abs(w.mean - 1.0 / 3.0) < 4 * w.se);
  CHECK(oracle::chi_square(sites, 100000.0 / 3.0) < oracle::chi_square_critical_001(2));
  CHECK(oracle::ks_pvalue(marks, [](double u) { return u; }) > 0.001);
}

TEST_CASE("apply_update")
{
  CHECK(apply_update(config(3, {1, 2}), 1, 0.5).positions() == Eigen::Vector2d(1, 2));
  CHECK(apply_update(config(4, {1, 2, 3}), 2, 0.0)[2] == 3.0);
  CHECK(apply_update(config(4, {1, 2, 3}), 2, 1.0)[2] == 1.0);
  CHECK(apply_update(config(4, {1, 2, 3}), 3, 0.25)[3] == doctest::Approx(0.25 * 2 + 0.75 * 4));

  const auto before = config(5, {0.5, 1.0, 3.0, 4.5});
  const auto after = apply_update(before, 2, 0.3);
  for (int k : {1, 3, 4}) CHECK(after[k] == before[k]);
  CHECK(is_valid(after));

  CHECK_THROWS_AS(apply_update(before, 0, 0.5), SimplexError);
  CHECK_THROWS_AS(apply_update(before, 5, 0.5), SimplexError);
  CHECK_THROWS_AS(apply_update(before, 1, 1.5), SimplexError);
}

TEST_CASE("updates keep configurations valid")
{
  Stream rng(2);
  auto c = Configuration::top(12);
  double clock = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto ev = next_event(12, 0.3, clock, rng);
    clock = ev.time;
    apply_update_inplace(c, ev.site, ev.u);
    REQUIRE(is_valid(c));
  }
}

TEST_CASE("simulate at horizon zero records the initial state")
{
  Stream rng(3);
  const auto x0 = sample_equilibrium(6, 1.0, rng);
  const std::vector<double> times = {0.0, 0.0};
  const auto s = simulate(x0, 1.0, 0.0, CensorScheme{}, all_coordinates(6), times, rng);
  CHECK(s.final_state == x0);
  for (int k = 1; k < 6; ++k) {
    CHECK(s.at(0, std::size_t(k - 1)) == x0[k]);
    CHECK(s.at(1, std::size_t(k - 1)) == x0[k]);
  }
}

TEST_CASE("full censoring freezes the state")
{
  Stream rng(4);
  const auto top = Configuration::top(7);
  const std::vector<double> times = {10.0};
  const auto s = simulate(top, 1.0, 10.0, CensorScheme::all(7), {observers::eigen(1)}, times, rng);
  CHECK(s.final_state == top);
}

TEST_CASE("censor scheme validation")
{
  CHECK_THROWS_AS(CensorScheme(5, {{1.0, {1}}}), SimplexError);
  CHECK_THROWS_AS(CensorScheme(5, {{0.0, {1}}, {0.0, {2}}}), SimplexError);
  CHECK_THROWS_AS(CensorScheme::constant(5, {5}), SimplexError);
  CHECK_THROWS_AS(CensorScheme::constant(5, {0}), SimplexError);

  const CensorScheme s(5, {{0.0, {1}}, {2.0, {2, 3}}});
  CHECK(s.censored(0.0, 1));
  CHECK_FALSE(s.censored(1.999, 2));
  CHECK(s.censored(2.0, 2));
  CHECK_FALSE(s.censored(2.0, 1));

  Stream rng(5);
  const std::vector<double> none;
  CHECK_THROWS_AS(simulate(Configuration::top(6), 1.0, 1.0, s, {}, none, rng), SimplexError);
}

TEST_CASE("sample times must be sorted and inside the horizon")
{
  Stream rng(6);
  const std::vector<double> unsorted = {2.0, 1.0};
  const std::vector<double> late = {5.0};
  CHECK_THROWS_AS(simulate(Configuration::top(4), 1.0, 3.0, CensorScheme{}, {}, unsorted, rng), SimplexError);
  CHECK_THROWS_AS(simulate(Configuration::top(4), 1.0, 3.0, CensorScheme{}, {}, late, rng), SimplexError);
}

TEST_CASE("censored events still consume their randomness")
{
  // Site 4 frozen in both runs isolates coordinates 1..3 from the rest, so
  // the extra censoring of sites 5..7 must leave them untouched bit for bit.
  const int n = 8;
  const std::vector<double> times = {1.0, 5.0, 20.0, 50.0};
  const std::vector<Observer<Configuration>> obs = {observers::coordinate(1), observers::coordinate(2),
                                                     observers::coordinate(3)};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Stream init(seed, 0, 9);
    const auto x0 = sample_equilibrium(n, 1.5, init);
    Stream r1(seed), r2(seed);
    const auto a = simulate(x0, 1.5, 50.0, CensorScheme::constant(n, {4}), obs, times, r1);
    const auto b = simulate(x0, 1.5, 50.0, CensorScheme::constant(n, {4, 5, 6, 7}), obs, times, r2);
    CHECK(a.values == b.values);
    CHECK(b.final_state[5] == x0[5]);
    CHECK(a.final_state[5] != x0[5]);
  }
}

TEST_CASE("sampling is right continuous")
{
  Stream probe(9);
  const auto first = next_event(5, 1.0, 0.0, probe);
  Stream rng(9);
  const std::vector<double> times = {first.time};
  const auto s = simulate(Configuration::top(5), 1.0, first.time, CensorScheme{}, all_coordinates(5), times, rng);
  const auto expected = apply_update(Configuration::top(5), first.site, first.u);
  for (int k = 1; k < 5; ++k) CHECK(s.at(0, std::size_t(k - 1)) == expected[k]);
}

TEST_CASE("exact eigen decay from the top configuration")
{
  const int n = 8;
  const auto p = eigen_decay_profile(Configuration::top(n), 1.0, {1}, {40.0}, 20000, 31);
  const double exact = eigen_stat(1, Configuration::top(n)) * std::exp(-spectral_gap(n) * 40.0);
  CHECK(std::abs(p.mean(0, 0) - exact) < 4 * p.standard_error(0, 0));
}

TEST_CASE("grand coupling preserves the coordinate order")
{
  const int n = 8;
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(i * 5.0);
  for (std::uint64_t r = 0; r < 1000; ++r) {
    Stream rng(r);
    const std::vector<Configuration> initials = {Configuration::bottom(n), sample_equilibrium(n, 1.0, rng),
                                                 Configuration::top(n)};
    bool ok = true;
    grand_coupled_run(initials, 1.0, 100.0, times, rng, [&](std::size_t, const std::vector<Configuration>& cs) {
      ok = ok && compare(cs[0], cs[2]).coordinate_le;
    });
    CHECK(ok);
  }
}

TEST_CASE("grand coupling on identical initials is bit identical")
{
  Stream rng(12);
  const auto x = sample_equilibrium(9, 2.0, rng);
  const std::vector<double> times = {1.0, 10.0, 30.0};
  const auto out = grand_coupled_simulate<double>({x, x}, 2.0, 30.0, all_coordinates(9), times, rng);
  CHECK(out[0].values == out[1].values);
  CHECK(out[0].final_state == out[1].final_state);
}

TEST_CASE("grand coupling preserves the gradient order in the unpinned space")
{
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(i * 3.0);
  for (std::uint64_t r = 0; r < 300; ++r) {
    Stream rng(r + 1000);
    const int n = 6;
    Eigen::VectorXd ea(n), eb(n);
    for (int k = 0; k < n; ++k) {
      ea[k] = rng.gamma(1.0);
      eb[k] = ea[k] + rng.gamma(0.5);
    }
    const auto a = from_increments(n, ea, false);
    const auto b = from_increments(n, eb, false);
    bool ok = true;
    const double tol = 1e-12 * b.right();
    grand_coupled_run<double>({a, b}, 1.0, 30.0, times, rng, [&](std::size_t, const std::vector<Configuration>& cs) {
      const auto rel = compare(cs[0], cs[1], tol);
      ok = ok && rel.gradient_le && rel.coordinate_le;
    });
    CHECK(ok);
    CHECK_THROWS_AS(grand_coupled_simulate<double>({a, Configuration::top(n)}, 1.0, 1.0, {}, {}, rng), SimplexError);
  }
}

TEST_CASE("equilibrium is stationary")
{
  const int n = 8;
  const std::vector<double> t5 = {5.0};
  std::vector<double> x1_0, f_0, g_0, x1_5, f_5, g_5;
  const auto obs = std::vector<Observer<Configuration>>{observers::coordinate(1), observers::eigen(1),
                                                         observers::min_gradient()};
  for (std::uint64_t r = 0; r < 10000; ++r) {
    Stream a(r, 0, 1), b(r, 0, 2);
    const auto x = sample_equilibrium(n, 1.0, a);
    x1_0.push_back(obs[0].fn(x));
    f_0.push_back(obs[1].fn(x));
    g_0.push_back(obs[2].fn(x));
    const auto s = simulate(sample_equilibrium(n, 1.0, b), 1.0, 5.0, CensorScheme{}, obs, t5, b);
    x1_5.push_back(s.at(0, 0));
    f_5.push_back(s.at(0, 1));
    g_5.push_back(s.at(0, 2));
  }
  CHECK(oracle::ks_two_sample_pvalue(x1_0, x1_5) > 0.001);
  CHECK(oracle::ks_two_sample_pvalue(f_0, f_5) > 0.001);
  CHECK(oracle::ks_two_sample_pvalue(g_0, g_5) > 0.001);
}

TEST_CASE("mean-field waiting time and conservation")
{
  // N = 2: one pair at rate 1/2. With alpha = 1 every jump moves eta, so a
  // window of length dt shows a change iff it holds at least one jump.
  const double T = 200000.0, dt = 0.05;
  std::vector<double> grid;
  for (double t = dt; t <= T; t += dt) grid.push_back(t);
  Stream rng(14);
  long changes = 0;
  double last = 2.0;
  meanfield_run(MeanFieldState{Eigen::Vector2d(2.0, 0.0)}, 1.0, T, grid, rng,
                [&](std::size_t, const MeanFieldState& st) {
                  changes += st.eta[0] != last;
                  last = st.eta[0];
                });
  const double windows = double(grid.size());
  const double p = 1.0 - std::exp(-0.5 * dt);
  CHECK(std::abs(double(changes) - windows * p) < 4 * std::sqrt(windows * p * (1 - p)));
  // Implied mean waiting time.
  const double rate = -std::log(1.0 - double(changes) / windows) / dt;
  CHECK(std::abs(1.0 / rate - 2.0) < 0.05);

  MeanFieldState s = MeanFieldState::concentrated(10);
  Stream r2(15);
  long events = 0;
  double horizon = 0.0;
  while (events < 100000) {
    // 4.5 events per unit time in expectation.
    horizon += 1000.0;
    s = meanfield_run(s, 0.7, 1000.0, {}, r2, [](std::size_t, const MeanFieldState&) {});
    events += 4500;
    REQUIRE((s.eta.array() >= 0.0).all());
  }
  CHECK(std::abs(s.eta.sum() - 10.0) < 1e-9 * 10);
}

TEST_CASE("mean-field decay rate")
{
  const int n = 8;
  std::vector<double> times;
  for (int i = 0; i < 12; ++i) times.push_back(i * 4.0 / meanfield_gap(n, 1.0) / 11.0);
  const auto p = meanfield_decay_profile(n, 1.0, times, 20000, 3);
  std::vector<double> m, se;
  for (Eigen::Index i = 0; i < p.mean.rows(); ++i) {
    m.push_back(p.mean(i, 0));
    se.push_back(p.standard_error(i, 0));
  }
  const auto fit = fit_decay_rate(times, m, se);
  CHECK(std::abs(fit.rate - 0.375) < 0.05 * 0.375);
}

TEST_CASE("replica results do not depend on the worker count")
{
  const std::vector<double> times = {2.0, 8.0};
  setenv("WORKER_COUNT", "1", 1);
  const auto one = eigen_decay_profile(Configuration::top(7), 1.3, {1, 2}, times, 500, 99);
  setenv("WORKER_COUNT", "3", 1);
  const auto three = eigen_decay_profile(Configuration::top(7), 1.3, {1, 2}, times, 500, 99);
  unsetenv("WORKER_COUNT");
  CHECK(one.mean == three.mean);
  CHECK(one.standard_error == three.standard_error);
}
