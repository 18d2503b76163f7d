#include "simplexwalk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "simplexwalk/coupling.hpp"
#include "simplexwalk/replicas.hpp"
#include "simplexwalk/spectral.hpp"

namespace simplexwalk {

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double fourth = 0.0;    // central fourth moment
};

Moments moments_of(const std::vector<double>& v)
{
  Moments m;
  const double n = double(v.size());
  for (double x : v) m.mean += x;
  m.mean /= n;
  double s2 = 0.0, s4 = 0.0;
  for (double x : v) {
    const double d = x - m.mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  m.variance = v.size() > 1 ? s2 / (n - 1.0) : 0.0;
  m.fourth = s4 / n;
  return m;
}

MomentEstimate moment_estimate(const std::vector<double>& v, std::uint64_t seed)
{
  const auto m = moments_of(v);
  const std::uint64_t reps = v.size();
  MomentEstimate out;
  out.mean = {m.mean, std::sqrt(m.variance / double(reps)), reps, seed};
  const double var_of_var = std::max(0.0, m.fourth - m.variance * m.variance) / double(reps);
  out.variance = {m.variance, std::sqrt(var_of_var), reps, seed};
  return out;
}

void check_reps(std::uint64_t reps)
{
  if (reps < 1) throw SimplexError("estimators need at least one replica");
}

// Per-replica rows of statistics sampled on a grid, folded in replica order.
MeanProfile fold_profile(const std::vector<double>& times, const std::vector<Eigen::MatrixXd>& per_replica)
{
  MeanProfile p;
  p.times = times;
  p.replicas = per_replica.size();
  const auto rows = per_replica.front().rows();
  const auto cols = per_replica.front().cols();
  p.mean = Eigen::MatrixXd::Zero(rows, cols);
  for (const auto& m : per_replica) p.mean += m;
  p.mean /= double(p.replicas);
  Eigen::MatrixXd ss = Eigen::MatrixXd::Zero(rows, cols);
  for (const auto& m : per_replica) ss += (m - p.mean).cwiseAbs2();
  const double denom = p.replicas > 1 ? double(p.replicas - 1) : 1.0;
  p.standard_error = (ss / denom / double(p.replicas)).cwiseSqrt();
  return p;
}

double horizon_of(const std::vector<double>& times)
{
  return times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
}

}  // namespace

double binomial_se(double p, std::uint64_t reps)
{
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / double(reps));
}

MeanProfile eigen_decay_profile(const Configuration& start, double alpha, const std::vector<int>& modes,
                                const std::vector<double>& times, std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  std::vector<Observer<Configuration>> obs;
  for (int j : modes) obs.push_back(observers::eigen(j));
  const double horizon = horizon_of(times);
  auto rows = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::trajectory);
    return simulate(start, alpha, horizon, CensorScheme{}, obs, times, rng).values;
  });
  return fold_profile(times, rows);
}

MeanProfile coordinate_mean_profile(const Configuration& start, double alpha, const std::vector<double>& times,
                                    std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  const int n = start.n();
  const double horizon = horizon_of(times);
  auto rows = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::trajectory);
    Eigen::MatrixXd m(Eigen::Index(times.size()), n - 1);
    run_trajectory(start, alpha, horizon, CensorScheme{}, times, rng,
                   [&](std::size_t row, const Configuration& c) {
                     m.row(Eigen::Index(row)) = c.positions().head(n - 1).transpose();
                   });
    return m;
  });
  return fold_profile(times, rows);
}

MeanProfile meanfield_decay_profile(int n, double alpha, const std::vector<double>& times, std::uint64_t reps,
                                    std::uint64_t seed)
{
  check_reps(reps);
  const double centre = meanfield_stat_equilibrium(n, alpha);
  const double horizon = horizon_of(times);
  auto rows = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::trajectory);
    Eigen::MatrixXd m(Eigen::Index(times.size()), 1);
    meanfield_run(MeanFieldState::concentrated(n), alpha, horizon, times, rng,
                  [&](std::size_t row, const MeanFieldState& s) {
                    m(Eigen::Index(row), 0) = meanfield_stat(s.eta) - centre;
                  });
    return m;
  });
  return fold_profile(times, rows);
}

std::vector<EstimateWithError> tv_lower_witness_profile(int n, double alpha, const std::vector<double>& times,
                                                        std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  const double horizon = horizon_of(times);
  // Column 0 holds f_N(X(0)); the rest the grid values.
  auto paths = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::trajectory);
    const auto x0 = sample_wilson_initial(n, alpha, rng);
    std::vector<double> row(times.size() + 1);
    row[0] = eigen_stat(1, x0);
    run_trajectory(x0, alpha, horizon, CensorScheme{}, times, rng,
                   [&](std::size_t k, const Configuration& c) { row[k + 1] = eigen_stat(1, c); });
    return row;
  });
  auto equilibrium = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::equilibrium);
    return eigen_stat(1, sample_equilibrium(n, alpha, rng));
  });

  double mean0 = 0.0;
  for (const auto& row : paths) mean0 += row[0];
  mean0 /= double(reps);
  const double gap = spectral_gap(n);

  std::vector<EstimateWithError> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double threshold = 0.5 * mean0 * std::exp(-gap * times[k]);
    std::uint64_t hits = 0, eq_hits = 0;
    for (const auto& row : paths) hits += row[k + 1] >= threshold;
    for (double f : equilibrium) eq_hits += f >= threshold;
    const double p1 = double(hits) / double(reps);
    const double p2 = double(eq_hits) / double(reps);
    const double se = std::sqrt(binomial_se(p1, reps) * binomial_se(p1, reps) +
                                binomial_se(p2, reps) * binomial_se(p2, reps));
    out.push_back({std::clamp(p1 - p2, 0.0, 1.0), se, reps, seed});
  }
  return out;
}

EstimateWithError tv_lower_witness(int n, double alpha, double t, std::uint64_t reps, std::uint64_t seed)
{
  return tv_lower_witness_profile(n, alpha, {t}, reps, seed).front();
}

std::vector<EstimateWithError> tv_upper_coupling_profile(int n, double alpha, const std::vector<double>& times,
                                                         const Configuration& start, std::uint64_t reps,
                                                         std::uint64_t seed)
{
  check_reps(reps);
  const double phase_cap = 4.0 * std::log(double(n)) / spectral_gap(n);
  // Grid points sharing a phase-one length share one set of runs.
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < times.size(); ++k) groups[std::min(times[k] / 2.0, phase_cap)].push_back(k);

  std::vector<EstimateWithError> out(times.size());
  std::uint64_t group_index = 0;
  for (const auto& [phase1_end, members] : groups) {
    double cap = 0.0;
    for (auto k : members) cap = std::max(cap, times[k]);
    const std::uint64_t tag = stream_tag::coalescence + group_index++;
    auto taus = map_replicas(reps, [&](std::uint64_t i) {
      Stream rng(seed, i, tag);
      if (!(cap > phase1_end)) {
        // t = 0: only an identical partner counts as coalesced.
        return sample_equilibrium(n, alpha, rng) == start ? 0.0 : HUGE_VAL;
      }
      const auto tau = coalescence_time_vs_equilibrium(start, alpha, phase1_end, cap, rng);
      return tau ? *tau : HUGE_VAL;
    });
    for (auto k : members) {
      std::uint64_t apart = 0;
      for (double tau : taus) apart += tau > times[k];
      const double p = double(apart) / double(reps);
      out[k] = {p, binomial_se(p, reps), reps, seed};
    }
  }
  return out;
}

EstimateWithError tv_upper_coupling(int n, double alpha, double t, const Configuration& start, std::uint64_t reps,
                                    std::uint64_t seed)
{
  return tv_upper_coupling_profile(n, alpha, {t}, start, reps, seed).front();
}

std::optional<double> crossing_time(const std::vector<double>& times, const std::vector<EstimateWithError>& column,
                                    double level)
{
  for (std::size_t k = 0; k < column.size(); ++k) {
    if (column[k].value <= level) {
      if (k == 0) return times[0];
      const double v0 = column[k - 1].value;
      const double v1 = column[k].value;
      const double w = (v0 - level) / (v0 - v1);
      return times[k - 1] + w * (times[k] - times[k - 1]);
    }
  }
  return std::nullopt;
}

MixingProfile mixing_profile(int n, double alpha, const std::vector<double>& times, std::uint64_t reps,
                             std::uint64_t seed)
{
  if (!std::is_sorted(times.begin(), times.end())) throw SimplexError("mixing_profile: grid must be sorted");
  MixingProfile p;
  p.times = times;
  p.lower = tv_lower_witness_profile(n, alpha, times, reps, seed);
  p.upper = tv_upper_coupling_profile(n, alpha, times, Configuration::top(n), reps, seed);
  for (double level : {0.75, 0.5, 0.25}) {
    p.crossings.push_back({level, crossing_time(times, p.lower, level), crossing_time(times, p.upper, level)});
  }
  return p;
}

Statistic statistic_by_name(const std::string& name, int n)
{
  if (name.rfind("neg:", 0) == 0) {
    auto inner = statistic_by_name(name.substr(4), n);
    return [inner](const Configuration& c) { return -inner(c); };
  }
  if (name == "f") return [](const Configuration& c) { return eigen_stat(1, c); };
  const auto parse_site = [&](const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') throw SimplexError("unknown statistic '" + name + "'");
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(s.substr(1), &used);
    } catch (const std::exception&) {
      throw SimplexError("unknown statistic '" + name + "'");
    }
    if (used != s.size() - 1 || k < 1 || k > n - 1) {
      throw SimplexError("statistic '" + name + "': site out of range 1.." + std::to_string(n - 1));
    }
    return k;
  };
  if (name.rfind("ge:", 0) == 0) {
    const auto colon = name.find(':', 3);
    if (colon == std::string::npos) throw SimplexError("unknown statistic '" + name + "'");
    const int k = parse_site(name.substr(3, colon - 3));
    double level = 0.0;
    try {
      level = std::stod(name.substr(colon + 1));
    } catch (const std::exception&) {
      throw SimplexError("statistic '" + name + "': bad threshold");
    }
    return [k, level](const Configuration& c) { return c[k] >= level ? 1.0 : 0.0; };
  }
  const int k = parse_site(name);
  return [k](const Configuration& c) { return c[k]; };
}

EstimateWithError fkg_correlation(int n, double alpha, const std::string& f, const std::string& g,
                                  std::uint64_t reps, std::uint64_t seed)
{
  if (reps < 3) throw SimplexError("fkg_correlation needs at least 3 samples");
  const auto sf = statistic_by_name(f, n);
  const auto sg = statistic_by_name(g, n);
  auto pairs = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::equilibrium);
    const auto c = sample_equilibrium(n, alpha, rng);
    return std::pair<double, double>(sf(c), sg(c));
  });
  const double m = double(reps);
  double mx = 0, my = 0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= m;
  my /= m;
  // Centred sums; leave-one-out covariances follow in closed form.
  double sx = 0, sy = 0, sxy = 0;
  for (const auto& [x, y] : pairs) {
    sx += x - mx;
    sy += y - my;
    sxy += (x - mx) * (y - my);
  }
  const double cov = (sxy - sx * sy / m) / (m - 1.0);
  std::vector<double> loo(pairs.size());
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double dx = pairs[i].first - mx;
    const double dy = pairs[i].second - my;
    const double c = ((sxy - dx * dy) - (sx - dx) * (sy - dy) / (m - 1.0)) / (m - 2.0);
    loo[i] = c;
    loo_mean += c;
  }
  loo_mean /= m;
  double jk = 0.0;
  for (double c : loo) jk += (c - loo_mean) * (c - loo_mean);
  return {cov, std::sqrt((m - 1.0) / m * jk), reps, seed};
}

std::vector<int> special_particles(int n, int K)
{
  if (K < 2 || K > n) throw SimplexError("special_particles: need 2 <= K <= n");
  std::vector<int> u;
  for (int i = 1; i < K; ++i) u.push_back(int((long long)i * n / K));
  return u;
}

CoordinateDifferences censoring_domination(int n, double alpha, const CensorScheme& censor, double t,
                                           std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  const auto top = Configuration::top(n);
  const std::vector<double> at{t};
  const auto run = [&](const CensorScheme& scheme, std::uint64_t tag) {
    auto rows = map_replicas(reps, [&](std::uint64_t i) {
      Stream rng(seed, i, tag);
      Eigen::MatrixXd m(1, n - 1);
      m.row(0) = run_trajectory(top, alpha, t, scheme, at, rng, [](std::size_t, const Configuration&) {})
                     .positions()
                     .transpose();
      return m;
    });
    return fold_profile(at, rows);
  };
  const auto censored = run(censor, stream_tag::censored);
  const auto free = run(CensorScheme{}, stream_tag::uncensored);
  CoordinateDifferences d;
  d.difference = (censored.mean - free.mean).row(0).transpose();
  d.standard_error =
      (censored.standard_error.cwiseAbs2() + free.standard_error.cwiseAbs2()).cwiseSqrt().row(0).transpose();
  d.replicas = reps;
  return d;
}

CoordinateDifferences censoring_domination(int n, double alpha, int K, double t, std::uint64_t reps,
                                           std::uint64_t seed)
{
  return censoring_domination(n, alpha, CensorScheme::constant(n, special_particles(n, K)), t, reps, seed);
}

std::vector<EstimateWithError> separation_witness_profile(int n, double alpha, const std::vector<double>& times,
                                                          std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  const int mid = n / 2;
  const double level = double(n) / 2.0 + 1.0;
  const double horizon = horizon_of(times);
  const auto top = Configuration::top(n);
  auto rows = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::trajectory);
    std::vector<char> hit(times.size());
    run_trajectory(top, alpha, horizon, CensorScheme{}, times, rng,
                   [&](std::size_t k, const Configuration& c) { hit[k] = c[mid] >= level; });
    return hit;
  });
  std::vector<EstimateWithError> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::uint64_t hits = 0;
    for (const auto& row : rows) hits += row[k];
    const double p = double(hits) / double(reps);
    out.push_back({p, binomial_se(p, reps), reps, seed});
  }
  return out;
}

EstimateWithError separation_witness(int n, double alpha, double t, std::uint64_t reps, std::uint64_t seed)
{
  return separation_witness_profile(n, alpha, {t}, reps, seed).front();
}

EstimateWithError separation_equilibrium(int n, double alpha, std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  const int mid = n / 2;
  const double level = double(n) / 2.0 + 1.0;
  auto hits = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::equilibrium);
    return sample_equilibrium(n, alpha, rng)[mid] >= level ? 1.0 : 0.0;
  });
  double p = 0.0;
  for (double h : hits) p += h;
  p /= double(reps);
  return {p, binomial_se(p, reps), reps, seed};
}

MomentEstimate special_particle_W(int n, double alpha, int K, double t, std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  const auto u = special_particles(n, K);
  const std::vector<double> at{t};
  const auto top = Configuration::top(n);
  auto w = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::trajectory);
    const auto c = run_trajectory(top, alpha, t, CensorScheme{}, at, rng, [](std::size_t, const Configuration&) {});
    double s = 0.0;
    for (int k : u) s += c[k] - double(k);
    return s;
  });
  return moment_estimate(w, seed);
}

WilsonMoments wilson_moments(int n, double alpha, const std::vector<int>& modes, const std::vector<double>& times,
                             std::uint64_t reps, std::uint64_t seed)
{
  check_reps(reps);
  for (int j : modes) {
    if (j < 1 || j > n - 1) throw SimplexError("wilson_moments: mode out of range");
  }
  const double horizon = horizon_of(times);
  auto rows = map_replicas(reps, [&](std::uint64_t i) {
    Stream rng(seed, i, stream_tag::trajectory);
    Eigen::MatrixXd m(Eigen::Index(times.size()), Eigen::Index(modes.size()));
    run_trajectory(sample_wilson_initial(n, alpha, rng), alpha, horizon, CensorScheme{}, times, rng,
                   [&](std::size_t k, const Configuration& c) {
                     for (std::size_t j = 0; j < modes.size(); ++j) {
                       m(Eigen::Index(k), Eigen::Index(j)) = eigen_stat(modes[j], c);
                     }
                   });
    return m;
  });
  WilsonMoments out;
  out.times = times;
  out.modes = modes;
  std::vector<double> column(reps);
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<MomentEstimate> per_mode;
    for (std::size_t j = 0; j < modes.size(); ++j) {
      for (std::uint64_t i = 0; i < reps; ++i) column[i] = rows[i](Eigen::Index(k), Eigen::Index(j));
      per_mode.push_back(moment_estimate(column, seed));
    }
    out.moments.push_back(std::move(per_mode));
  }
  return out;
}

}  // namespace simplexwalk
