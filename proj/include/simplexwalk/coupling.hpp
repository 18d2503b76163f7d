#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexwalk/beta_math.hpp"
#include "simplexwalk/dynamics.hpp"
#include "simplexwalk/error.hpp"
#include "simplexwalk/random.hpp"
#include "simplexwalk/simplex_core.hpp"

namespace simplexwalk {

/// Two configurations evolved jointly.
///
/// `ordered` records that a <= b coordinatewise holds by construction (only
/// promised when alpha >= 1). `coalesced` is sticky: once the two sides are
/// bit-identical they are driven by shared draws forever.
template <typename Scalar>
struct BasicCoupledPair {
  BasicConfiguration<Scalar> a;
  BasicConfiguration<Scalar> b;
  double alpha = 1.0;
  bool ordered = false;
  bool coalesced = false;

  BasicCoupledPair() = default;
  BasicCoupledPair(BasicConfiguration<Scalar> lower, BasicConfiguration<Scalar> upper, double alpha_,
                   bool ordered_ = false)
      : a(std::move(lower)), b(std::move(upper)), alpha(alpha_), ordered(ordered_)
  {
    if (a.n() != b.n() || a.pinned() != b.pinned()) {
      throw SimplexError("CoupledPair: sides differ in size or pinning");
    }
    if (!(alpha > 0.0)) throw SimplexError("CoupledPair: alpha must be positive");
    if (ordered && !compare(a, b).coordinate_le) {
      throw SimplexError("CoupledPair: declared ordered but a <= b fails");
    }
    coalesced = (a == b);
  }

  int n() const noexcept { return a.n(); }
};
using CoupledPair = BasicCoupledPair<double>;

template <typename Scalar>
struct BasicCoupledDraw {
  Scalar a;
  Scalar b;
  bool stuck;
};

namespace detail {

inline constexpr long kMaxResidualProposals = 1'000'000;

template <typename Scalar>
bool contains(const BasicInterval<Scalar>& I, Scalar x)
{
  return x >= I.lo && x <= I.hi;
}

}  // namespace detail

/// Maximal coupling of Beta_alpha(Ia) and Beta_alpha(Ib).
///
/// V ~ Beta(Ia) is kept on both sides with probability min(1, B_b(V)/B_a(V)).
/// Otherwise a = V and b is drawn from Beta(Ib) by rejection, accepting W
/// with probability [1 - B_a(W)/B_b(W)]_+. Each side is an exact Beta draw
/// and the sides agree with probability 1 - TV.
template <typename Scalar>
BasicCoupledDraw<Scalar> maximal_coupling_draw(double alpha, const BasicInterval<Scalar>& Ia,
                                               const BasicInterval<Scalar>& Ib, Stream& rng)
{
  const BasicIntervalBeta<Scalar> da{Scalar(alpha), Ia};
  const BasicIntervalBeta<Scalar> db{Scalar(alpha), Ib};
  if (Ia.degenerate() || Ib.degenerate()) {
    const Scalar va = sample_interval_beta(da, rng);
    const Scalar vb = sample_interval_beta(db, rng);
    return {va, vb, va == vb};
  }
  const Scalar v = sample_interval_beta(da, rng);
  if (Ia == Ib) return {v, v, true};

  using std::exp;
  using std::log;
  if (detail::contains(Ib, v)) {
    const Scalar la = log_beta_density(da, v);
    const Scalar lb = log_beta_density(db, v);
    if (lb >= la) return {v, v, true};
    if (lb > -std::numeric_limits<Scalar>::infinity() && Scalar(rng.uniform()) < exp(lb - la)) {
      return {v, v, true};
    }
  }
  for (long k = 0; k < detail::kMaxResidualProposals; ++k) {
    const Scalar w = sample_interval_beta(db, rng);
    const Scalar la = log_beta_density(da, w);
    const Scalar lb = log_beta_density(db, w);
    const Scalar u = Scalar(rng.uniform());
    if (la == -std::numeric_limits<Scalar>::infinity()) return {v, w, false};
    if (lb == -std::numeric_limits<Scalar>::infinity() || !(la < lb)) continue;
    if (u < Scalar(1) - exp(la - lb)) return {v, w, false};
  }
  throw SimplexError("maximal_coupling_draw: residual rejection exhausted " +
                     std::to_string(detail::kMaxResidualProposals) + " proposals (Ia=[" +
                     std::to_string(double(Ia.lo)) + ", " + std::to_string(double(Ia.hi)) + "], Ib=[" +
                     std::to_string(double(Ib.lo)) + ", " + std::to_string(double(Ib.hi)) +
                     "], alpha=" + std::to_string(alpha) + ")");
}

template <typename Scalar>
BasicInterval<Scalar> resampling_interval(const BasicConfiguration<Scalar>& c, int site)
{
  return {c[site - 1], c[site + 1]};
}

/// Resample `site` on both sides with the maximal coupling. Returns whether
/// the two new values coincide.
template <typename Scalar>
bool maximal_coupled_update_inplace(BasicCoupledPair<Scalar>& p, int site, Stream& rng)
{
  if (p.coalesced) {
    const Scalar v =
        sample_interval_beta(BasicIntervalBeta<Scalar>{Scalar(p.alpha), resampling_interval(p.a, site)}, rng);
    p.a.positions()[site - 1] = v;
    p.b.positions()[site - 1] = v;
    return true;
  }
  const auto draw = maximal_coupling_draw(p.alpha, resampling_interval(p.a, site),
                                          resampling_interval(p.b, site), rng);
  p.a.positions()[site - 1] = draw.a;
  p.b.positions()[site - 1] = draw.b;
  return draw.a == draw.b;
}

template <typename Scalar>
BasicCoupledPair<Scalar> maximal_coupled_update(BasicCoupledPair<Scalar> p, int site, Stream& rng)
{
  if (site < 1 || site > p.n() - 1) {
    throw SimplexError("maximal_coupled_update: site " + std::to_string(site) + " out of range");
  }
  maximal_coupled_update_inplace(p, site, rng);
  p.coalesced = p.coalesced || p.a == p.b;
  return p;
}

/// sum_k |b_k - a_k| over the stored coordinates.
template <typename Scalar>
Scalar area(const BasicCoupledPair<Scalar>& p)
{
  return (p.b.positions() - p.a.positions()).cwiseAbs().sum();
}

/// |midpoint(I^b_k) - midpoint(I^a_k)| for k = 1..N-1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> midpoint_gaps(const BasicCoupledPair<Scalar>& p)
{
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(p.n() - 1);
  for (int k = 1; k < p.n(); ++k) {
    using std::abs;
    g[k - 1] = abs((p.b[k - 1] + p.b[k + 1]) - (p.a[k - 1] + p.a[k + 1])) / Scalar(2);
  }
  return g;
}

/// max(grad a_k, grad b_k) for k = 1..N-1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> max_gradients(const BasicCoupledPair<Scalar>& p)
{
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(p.n() - 1);
  for (int k = 1; k < p.n(); ++k) g[k - 1] = std::max(p.a.gradient(k), p.b.gradient(k));
  return g;
}

/// sum_k min(dXbar_k * G_k, G_k^2), G_k the larger of the two gradients:
/// the lower bound (up to a constant) on the jump rate of the area bracket.
template <typename Scalar>
Scalar bracket_rate_bound(const BasicCoupledPair<Scalar>& p)
{
  const auto gaps = midpoint_gaps(p);
  const auto grads = max_gradients(p);
  return gaps.cwiseProduct(grads).cwiseMin(grads.cwiseAbs2()).sum();
}

struct AreaRecord {
  double time = 0.0;
  double area = 0.0;
  double bracket_rate_bound = 0.0;
};

template <typename Scalar>
AreaRecord area_record(const BasicCoupledPair<Scalar>& p, double time)
{
  return {time, double(area(p)), double(bracket_rate_bound(p))};
}

/// Output of coupled_simulate.
template <typename Scalar>
struct CoupledSeries : ObserverSeries<BasicCoupledPair<Scalar>> {
  std::optional<double> coalescence_time;
  /// sum of squared area jumps, the realised bracket of the area martingale
  double area_quadratic_variation = 0.0;
  /// time integral of bracket_rate_bound along the path
  double bracket_bound_integral = 0.0;
};

struct CoupledRunOptions {
  bool stop_on_coalescence = false;
  bool monitor_bracket = false;
};

/// Evolve the pair with maximal-coupling updates driven by the superposed
/// clock. Coalescence is the first event after which every coordinate is
/// bit-identical.
template <typename Scalar>
CoupledSeries<Scalar> coupled_simulate(BasicCoupledPair<Scalar> p, double horizon,
                                       const std::vector<Observer<BasicCoupledPair<Scalar>>>& obs,
                                       std::span<const double> sample_times, Stream& rng,
                                       CoupledRunOptions options = {})
{
  detail::check_sample_times(sample_times, horizon);
  CoupledSeries<Scalar> out;
  static_cast<ObserverSeries<BasicCoupledPair<Scalar>>&>(out) = detail::make_series(obs, sample_times);
  const int n = p.n();
  int mismatches = 0;
  for (int k = 1; k < n; ++k) mismatches += p.a[k] != p.b[k];
  if (!p.a.pinned() && p.a.right() != p.b.right()) mismatches += 1;
  if (mismatches == 0) {
    p.coalesced = true;
    out.coalescence_time = 0.0;
  }

  std::size_t next = 0;
  double clock = 0.0;
  double bound_now = options.monitor_bracket ? double(bracket_rate_bound(p)) : 0.0;
  for (;;) {
    const UpdateEvent ev = next_clock(n, clock, rng);
    while (next < sample_times.size() && sample_times[next] < ev.time) {
      detail::record(out, obs, next++, std::as_const(p));
    }
    if (ev.time > horizon) {
      if (options.monitor_bracket) out.bracket_bound_integral += bound_now * (horizon - clock);
      break;
    }
    if (options.monitor_bracket) out.bracket_bound_integral += bound_now * (ev.time - clock);
    clock = ev.time;
    const int k = ev.site;
    const Scalar before_gap = p.b[k] - p.a[k];
    const bool was_equal = before_gap == Scalar(0);
    const bool now_equal = maximal_coupled_update_inplace(p, k, rng);
    if (options.monitor_bracket) {
      using std::abs;
      const double jump = double(abs(p.b[k] - p.a[k]) - abs(before_gap));
      out.area_quadratic_variation += jump * jump;
      bound_now = double(bracket_rate_bound(p));
    }
    mismatches += int(was_equal) - int(now_equal);
    if (!p.coalesced && mismatches == 0) {
      p.coalesced = true;
      out.coalescence_time = ev.time;
      if (options.stop_on_coalescence) break;
    }
  }
  while (next < sample_times.size()) detail::record(out, obs, next++, std::as_const(p));
  out.final_state = std::move(p);
  return out;
}

/// Coalescence time of x0 against an independent equilibrium partner.
///
/// The partner is the first thing drawn from `rng`. Up to `phase1_end` both
/// trajectories share the event stream (order-preserving grand coupling);
/// afterwards every event applies the maximal coupling, with no ordering
/// assumed. Returns nullopt when the pair is still apart at `cap`.
template <typename Scalar>
std::optional<double> coalescence_time_vs_equilibrium(const BasicConfiguration<Scalar>& x0, double alpha,
                                                      double phase1_end, double cap, Stream& rng)
{
  if (!x0.pinned()) throw SimplexError("coalescence_time_vs_equilibrium: pinned configuration required");
  if (!(phase1_end >= 0.0) || !(cap > phase1_end)) {
    throw SimplexError("coalescence_time_vs_equilibrium: need 0 <= phase1_end < cap");
  }
  const int n = x0.n();
  BasicCoupledPair<Scalar> p(x0, sample_equilibrium<Scalar>(n, alpha, rng), alpha);
  if (p.coalesced) return 0.0;
  int mismatches = 0;
  for (int k = 1; k < n; ++k) mismatches += p.a[k] != p.b[k];

  double clock = 0.0;
  for (;;) {
    const UpdateEvent ev = next_event(n, alpha, clock, rng);
    if (ev.time > phase1_end) break;
    clock = ev.time;
    const int k = ev.site;
    const bool was_equal = p.a[k] == p.b[k];
    apply_update_inplace(p.a, k, Scalar(ev.u));
    apply_update_inplace(p.b, k, Scalar(ev.u));
    mismatches += int(was_equal) - int(p.a[k] == p.b[k]);
    if (mismatches == 0) return ev.time;
  }
  // Memorylessness lets the second phase restart its clock at phase1_end.
  clock = phase1_end;
  for (;;) {
    const UpdateEvent ev = next_clock(n, clock, rng);
    if (ev.time > cap) return std::nullopt;
    clock = ev.time;
    const int k = ev.site;
    const bool was_equal = p.a[k] == p.b[k];
    const bool now_equal = maximal_coupled_update_inplace(p, k, rng);
    mismatches += int(was_equal) - int(now_equal);
    if (mismatches == 0) return ev.time;
  }
}

struct MinProductBound {
  double lhs = 0.0;  // sum_i a_i min(a_i, b_i)
  double rhs = 0.0;  // sum_{i <= K} a_i^2, or a_1 min(a_1, sigma) when K = 0
  long K = 0;        // floor(sum b / B)
};

/// Both sides of the deterministic inequality used to turn per-site bracket
/// rates into a bound in terms of the area: for an increasing sequence a of
/// positive reals and an arbitrary nonnegative b, both bounded by B,
/// sum a_i (a_i ^ b_i) >= sum_{i<=K} a_i^2 with K = floor(sum b / B).
inline MinProductBound min_product_bound(std::span<const double> a, std::span<const double> b, double B)
{
  if (a.size() != b.size() || a.empty()) throw SimplexError("min_product_bound: size mismatch");
  MinProductBound r;
  double sigma = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.lhs += a[i] * std::min(a[i], b[i]);
    sigma += b[i];
  }
  r.K = long(std::floor(sigma / B));
  if (r.K == 0) {
    r.rhs = a[0] * std::min(a[0], sigma);
  } else {
    for (long i = 0; i < std::min<long>(r.K, long(a.size())); ++i) r.rhs += a[std::size_t(i)] * a[std::size_t(i)];
  }
  return r;
}

}  // namespace simplexwalk
