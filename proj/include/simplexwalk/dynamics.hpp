#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "simplexwalk/error.hpp"
#include "simplexwalk/random.hpp"
#include "simplexwalk/simplex_core.hpp"
#include "simplexwalk/spectral.hpp"

namespace simplexwalk {

/// One atom of the graphical construction.
struct UpdateEvent {
  double time = 0.0;
  int site = 1;    // 1..N-1
  double u = 0.5;  // symmetric Beta(alpha) mark
};

/// Next ring of the superposed clock: N-1 rate-one clocks merged into one
/// clock of rate N-1 with a uniformly chosen site.
inline UpdateEvent next_clock(int n, double clock, Stream& rng)
{
  UpdateEvent ev;
  ev.time = clock + rng.exponential(double(n - 1));
  ev.site = rng.uniform_int(1, n - 1);
  return ev;
}

inline UpdateEvent next_event(int n, double alpha, double clock, Stream& rng)
{
  if (n < 2) throw SimplexError("next_event: n must be at least 2");
  UpdateEvent ev = next_clock(n, clock, rng);
  ev.u = rng.symmetric_beta(alpha);
  return ev;
}

/// x_site <- u x_{site-1} + (1-u) x_{site+1}, clamped to the resampling
/// interval so rounding can never break the ordering. The rounded convex
/// combination is monotone in both neighbours, so shared marks keep the
/// coordinate order exactly.
template <typename Scalar>
void apply_update_inplace(BasicConfiguration<Scalar>& c, int site, Scalar u)
{
  const Scalar lo = c[site - 1];
  const Scalar hi = c[site + 1];
  const Scalar v = u * lo + (Scalar(1) - u) * hi;
  c.positions()[site - 1] = std::clamp(v, lo, hi);
}

template <typename Scalar>
BasicConfiguration<Scalar> apply_update(BasicConfiguration<Scalar> c, int site, Scalar u)
{
  if (site < 1 || site > c.n() - 1) {
    throw SimplexError("apply_update: site " + std::to_string(site) + " outside 1.." +
                       std::to_string(c.n() - 1));
  }
  if (!(u >= Scalar(0) && u <= Scalar(1))) throw SimplexError("apply_update: mark outside [0, 1]");
  apply_update_inplace(c, site, u);
  return c;
}

/// Piecewise-constant set of suppressed sites. Segment i covers
/// [from_i, from_{i+1}).
class CensorScheme {
 public:
  struct Segment {
    double from = 0.0;
    std::vector<int> sites;
  };

  /// No censoring.
  CensorScheme() = default;

  CensorScheme(int n, std::vector<Segment> segments) : n_(n), segments_(std::move(segments))
  {
    if (segments_.empty()) return;
    if (segments_.front().from != 0.0) throw SimplexError("CensorScheme: first segment must start at 0");
    masks_.reserve(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (i > 0 && !(segments_[i].from > segments_[i - 1].from)) {
        throw SimplexError("CensorScheme: segment start times must increase strictly");
      }
      std::vector<char> mask(std::size_t(n_ + 1), 0);
      for (int s : segments_[i].sites) {
        if (s < 1 || s > n_ - 1) {
          throw SimplexError("CensorScheme: site " + std::to_string(s) + " outside 1.." +
                             std::to_string(n_ - 1));
        }
        mask[std::size_t(s)] = 1;
      }
      masks_.push_back(std::move(mask));
    }
  }

  static CensorScheme constant(int n, std::vector<int> sites) { return {n, {{0.0, std::move(sites)}}}; }

  static CensorScheme all(int n)
  {
    std::vector<int> sites(std::size_t(n - 1));
    for (int i = 0; i < n - 1; ++i) sites[std::size_t(i)] = i + 1;
    return constant(n, std::move(sites));
  }

  bool empty() const noexcept { return segments_.empty(); }
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  bool censored(double t, int site) const
  {
    if (segments_.empty()) return false;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.from; });
    const auto idx = std::size_t(it - segments_.begin()) - 1;
    return masks_[idx][std::size_t(site)] != 0;
  }

  /// Sequential lookup for nondecreasing query times.
  class Cursor {
   public:
    explicit Cursor(const CensorScheme& s) : scheme_(&s) {}
    bool censored(double t, int site)
    {
      const auto& seg = scheme_->segments_;
      if (seg.empty()) return false;
      while (idx_ + 1 < seg.size() && seg[idx_ + 1].from <= t) ++idx_;
      return scheme_->masks_[idx_][std::size_t(site)] != 0;
    }

   private:
    const CensorScheme* scheme_;
    std::size_t idx_ = 0;
  };

  Cursor cursor() const { return Cursor(*this); }

  void check_size(int n) const
  {
    if (!segments_.empty() && n != n_) throw SimplexError("CensorScheme: built for a different n");
  }

 private:
  int n_ = 0;
  std::vector<Segment> segments_;
  std::vector<std::vector<char>> masks_;
};

template <typename State>
struct Observer {
  std::string name;
  std::function<double(const State&)> fn;
};

/// Statistics sampled along one trajectory.
template <typename State>
struct ObserverSeries {
  std::vector<std::string> names;
  std::vector<double> times;
  Eigen::MatrixXd values;  // rows: times, columns: statistics
  std::uint64_t replica = 0;
  State final_state;

  double at(std::size_t time_index, std::size_t stat) const
  {
    return values(Eigen::Index(time_index), Eigen::Index(stat));
  }
};

namespace observers {

template <typename Scalar = double>
Observer<BasicConfiguration<Scalar>> eigen(int j)
{
  return {"f" + std::to_string(j),
          [j](const BasicConfiguration<Scalar>& c) { return double(eigen_stat(j, c)); }};
}

template <typename Scalar = double>
Observer<BasicConfiguration<Scalar>> coordinate(int k)
{
  return {"x" + std::to_string(k), [k](const BasicConfiguration<Scalar>& c) { return double(c[k]); }};
}

template <typename Scalar = double>
Observer<BasicConfiguration<Scalar>> min_gradient()
{
  return {"min_gradient", [](const BasicConfiguration<Scalar>& c) {
            Scalar m = c.gradient(1);
            for (int k = 2; k < c.n(); ++k) m = std::min(m, c.gradient(k));
            return double(m);
          }};
}

template <typename Scalar = double>
Observer<BasicConfiguration<Scalar>> max_gradient()
{
  return {"max_gradient", [](const BasicConfiguration<Scalar>& c) {
            Scalar m = c.gradient(1);
            for (int k = 2; k < c.n(); ++k) m = std::max(m, c.gradient(k));
            return double(m);
          }};
}

}  // namespace observers

namespace detail {

inline void check_sample_times(std::span<const double> times, double horizon)
{
  if (!(horizon >= 0.0)) throw SimplexError("simulation horizon must be nonnegative");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > horizon) {
      throw SimplexError("sample time " + std::to_string(times[i]) + " outside [0, horizon]");
    }
    if (i > 0 && times[i] < times[i - 1]) throw SimplexError("sample times must be sorted");
  }
}

template <typename State>
ObserverSeries<State> make_series(const std::vector<Observer<State>>& obs, std::span<const double> times)
{
  ObserverSeries<State> s;
  for (const auto& o : obs) s.names.push_back(o.name);
  s.times.assign(times.begin(), times.end());
  s.values.resize(Eigen::Index(times.size()), Eigen::Index(obs.size()));
  return s;
}

template <typename State>
void record(ObserverSeries<State>& s, const std::vector<Observer<State>>& obs, std::size_t row,
            const State& state)
{
  for (std::size_t j = 0; j < obs.size(); ++j) {
    s.values(Eigen::Index(row), Eigen::Index(j)) = obs[j].fn(state);
  }
}

}  // namespace detail

/// Evolve one trajectory to `horizon`, calling on_sample(i, state) at each
/// sample time with the right-continuous state (updates at times <= t
/// included). Censored events still consume their draws.
template <typename Scalar, typename OnSample>
BasicConfiguration<Scalar> run_trajectory(BasicConfiguration<Scalar> state, double alpha, double horizon,
                                          const CensorScheme& censor, std::span<const double> sample_times,
                                          Stream& rng, OnSample&& on_sample)
{
  detail::check_sample_times(sample_times, horizon);
  censor.check_size(state.n());
  const int n = state.n();
  auto cursor = censor.cursor();
  std::size_t next = 0;
  double clock = 0.0;
  for (;;) {
    const UpdateEvent ev = next_event(n, alpha, clock, rng);
    while (next < sample_times.size() && sample_times[next] < ev.time) on_sample(next++, std::as_const(state));
    if (ev.time > horizon) break;
    clock = ev.time;
    if (!cursor.censored(ev.time, ev.site)) apply_update_inplace(state, ev.site, Scalar(ev.u));
  }
  return state;
}

template <typename Scalar>
ObserverSeries<BasicConfiguration<Scalar>> simulate(
    const BasicConfiguration<Scalar>& initial, double alpha, double horizon, const CensorScheme& censor,
    const std::vector<Observer<BasicConfiguration<Scalar>>>& obs, std::span<const double> sample_times,
    Stream& rng)
{
  auto series = detail::make_series(obs, sample_times);
  series.final_state = run_trajectory(initial, alpha, horizon, censor, sample_times, rng,
                                      [&](std::size_t i, const BasicConfiguration<Scalar>& c) {
                                        detail::record(series, obs, i, c);
                                      });
  return series;
}

/// Drive every initial state with one shared event stream. on_sample receives
/// the whole family at each sample time.
template <typename Scalar, typename OnSample>
std::vector<BasicConfiguration<Scalar>> grand_coupled_run(std::vector<BasicConfiguration<Scalar>> states,
                                                          double alpha, double horizon,
                                                          std::span<const double> sample_times, Stream& rng,
                                                          OnSample&& on_sample)
{
  detail::check_sample_times(sample_times, horizon);
  if (states.empty()) return states;
  const int n = states.front().n();
  for (const auto& s : states) {
    if (s.n() != n || s.pinned() != states.front().pinned()) {
      throw SimplexError("grand_coupled_run: initial states differ in size or pinning");
    }
  }
  std::size_t next = 0;
  double clock = 0.0;
  for (;;) {
    const UpdateEvent ev = next_event(n, alpha, clock, rng);
    while (next < sample_times.size() && sample_times[next] < ev.time) on_sample(next++, std::as_const(states));
    if (ev.time > horizon) break;
    clock = ev.time;
    for (auto& s : states) apply_update_inplace(s, ev.site, Scalar(ev.u));
  }
  return states;
}

template <typename Scalar>
std::vector<ObserverSeries<BasicConfiguration<Scalar>>> grand_coupled_simulate(
    const std::vector<BasicConfiguration<Scalar>>& initials, double alpha, double horizon,
    const std::vector<Observer<BasicConfiguration<Scalar>>>& obs, std::span<const double> sample_times,
    Stream& rng)
{
  std::vector<ObserverSeries<BasicConfiguration<Scalar>>> out;
  for (std::size_t i = 0; i < initials.size(); ++i) {
    out.push_back(detail::make_series(obs, sample_times));
    out.back().replica = i;
  }
  auto finals = grand_coupled_run(initials, alpha, horizon, sample_times, rng,
                                  [&](std::size_t row, const std::vector<BasicConfiguration<Scalar>>& cs) {
                                    for (std::size_t i = 0; i < cs.size(); ++i) {
                                      detail::record(out[i], obs, row, cs[i]);
                                    }
                                  });
  for (std::size_t i = 0; i < finals.size(); ++i) out[i].final_state = std::move(finals[i]);
  return out;
}

/// Increments of the exchange process on the complete graph.
struct MeanFieldState {
  Eigen::VectorXd eta;

  int n() const noexcept { return int(eta.size()); }
  /// eta = (N, 0, ..., 0).
  static MeanFieldState concentrated(int n)
  {
    MeanFieldState s{Eigen::VectorXd::Zero(n)};
    s.eta[0] = double(n);
    return s;
  }
};

/// Each unordered pair {i, j} rings at rate 1/N and splits eta_i + eta_j
/// by a symmetric Beta mark. Total rate (N - 1) / 2.
template <typename OnSample>
MeanFieldState meanfield_run(MeanFieldState state, double alpha, double horizon,
                             std::span<const double> sample_times, Stream& rng, OnSample&& on_sample)
{
  detail::check_sample_times(sample_times, horizon);
  const int n = state.n();
  if (n < 2) throw SimplexError("meanfield_run: need at least two increments");
  if ((state.eta.array() < 0.0).any()) throw SimplexError("meanfield_run: negative increment");
  const double rate = double(n - 1) / 2.0;
  std::size_t next = 0;
  double clock = 0.0;
  for (;;) {
    const double t = clock + rng.exponential(rate);
    while (next < sample_times.size() && sample_times[next] < t) on_sample(next++, std::as_const(state));
    if (t > horizon) break;
    clock = t;
    int i = rng.uniform_int(0, n - 1);
    int j = rng.uniform_int(0, n - 2);
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    const double u = rng.symmetric_beta(alpha);
    const double s = state.eta[i] + state.eta[j];
    state.eta[i] = u * s;
    state.eta[j] = std::max(0.0, s - state.eta[i]);
  }
  return state;
}

inline ObserverSeries<MeanFieldState> meanfield_simulate(const MeanFieldState& initial, double alpha,
                                                         double horizon,
                                                         const std::vector<Observer<MeanFieldState>>& obs,
                                                         std::span<const double> sample_times, Stream& rng)
{
  auto series = detail::make_series(obs, sample_times);
  series.final_state = meanfield_run(initial, alpha, horizon, sample_times, rng,
                                     [&](std::size_t i, const MeanFieldState& s) {
                                       detail::record(series, obs, i, s);
                                     });
  return series;
}

}  // namespace simplexwalk
