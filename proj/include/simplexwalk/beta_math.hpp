#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "simplexwalk/error.hpp"
#include "simplexwalk/quadrature.hpp"
#include "simplexwalk/random.hpp"

namespace simplexwalk {

/// Closed interval [lo, hi]; zero length denotes a point mass.
template <typename Scalar>
struct BasicInterval {
  Scalar lo = Scalar(0);
  Scalar hi = Scalar(1);

  Scalar length() const noexcept { return hi - lo; }
  bool degenerate() const noexcept { return !(hi > lo); }
  Scalar midpoint() const noexcept { return (lo + hi) / 2; }

  friend bool operator==(const BasicInterval&, const BasicInterval&) = default;
};
using Interval = BasicInterval<double>;

template <typename Scalar>
Scalar overlap(const BasicInterval<Scalar>& a, const BasicInterval<Scalar>& b)
{
  return std::max(Scalar(0), std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

/// Symmetric Beta(alpha) law rescaled to an interval.
template <typename Scalar>
struct BasicIntervalBeta {
  Scalar alpha = Scalar(1);
  BasicInterval<Scalar> interval;
};
using IntervalBeta = BasicIntervalBeta<double>;

/// log(Gamma(2a) / Gamma(a)^2).
template <typename Scalar>
Scalar log_beta_normalizer(Scalar alpha)
{
  using std::lgamma;
  return lgamma(2 * alpha) - 2 * lgamma(alpha);
}

/// Density of Beta_alpha on [a, b]. Zero outside the interval. At an endpoint
/// the value is 0 (alpha > 1), 1/(b-a) (alpha = 1) or +infinity (alpha < 1),
/// the last one marking the integrable endpoint singularity.
template <typename Scalar>
Scalar beta_density(const BasicIntervalBeta<Scalar>& d, Scalar x)
{
  const auto& I = d.interval;
  if (!(d.alpha > Scalar(0))) throw SimplexError("beta_density: alpha must be positive");
  if (I.degenerate()) throw SimplexError("beta_density: point mass has no density");
  if (x < I.lo || x > I.hi) return Scalar(0);
  if (x == I.lo || x == I.hi) {
    if (d.alpha > Scalar(1)) return Scalar(0);
    if (d.alpha == Scalar(1)) return Scalar(1) / I.length();
    return std::numeric_limits<Scalar>::infinity();
  }
  using std::exp;
  using std::log;
  const Scalar am1 = d.alpha - Scalar(1);
  return exp(log_beta_normalizer(d.alpha) + am1 * (log(x - I.lo) + log(I.hi - x)) -
             (2 * d.alpha - Scalar(1)) * log(I.length()));
}

/// log-density, -infinity outside the support. Used for density ratios.
template <typename Scalar>
Scalar log_beta_density(const BasicIntervalBeta<Scalar>& d, Scalar x)
{
  const auto& I = d.interval;
  constexpr Scalar minus_inf = -std::numeric_limits<Scalar>::infinity();
  if (x < I.lo || x > I.hi) return minus_inf;
  using std::log;
  if (x == I.lo || x == I.hi) {
    if (d.alpha > Scalar(1)) return minus_inf;
    if (d.alpha == Scalar(1)) return -log(I.length());
    return std::numeric_limits<Scalar>::infinity();
  }
  return log_beta_normalizer(d.alpha) +
         (d.alpha - Scalar(1)) * (log(x - I.lo) + log(I.hi - x)) -
         (2 * d.alpha - Scalar(1)) * log(I.length());
}

template <typename Scalar>
Scalar sample_interval_beta(const BasicIntervalBeta<Scalar>& d, Stream& rng)
{
  const auto& I = d.interval;
  if (I.degenerate()) return I.lo;
  const Scalar u = Scalar(rng.symmetric_beta(double(d.alpha)));
  return std::clamp(I.lo + u * I.length(), I.lo, I.hi);
}

/// Adaptive quadrature of the positive part of B_alpha(I1) - B_alpha(I2),
/// split at the four endpoints. For alpha < 1 every half-panel is mapped
/// through x = end + h * v^(1/alpha), which cancels the endpoint singularity.
template <typename Scalar>
QuadratureResult<Scalar> beta_interval_tv_quadrature(Scalar alpha, const BasicInterval<Scalar>& I1,
                                                     const BasicInterval<Scalar>& I2,
                                                     Scalar tol = Scalar(1e-9))
{
  if (I1.degenerate() || I2.degenerate()) {
    throw SimplexError("beta_interval_tv_quadrature: degenerate interval");
  }
  const BasicIntervalBeta<Scalar> d1{alpha, I1};
  const BasicIntervalBeta<Scalar> d2{alpha, I2};
  const auto diff = [&](Scalar x) {
    const Scalar v = beta_density(d1, x) - beta_density(d2, x);
    return v > Scalar(0) ? v : Scalar(0);
  };
  std::vector<Scalar> ends = {I1.lo, I1.hi, I2.lo, I2.hi};
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  if (alpha >= Scalar(1)) return integrate_adaptive<Scalar>(diff, ends, tol);

  // Work in (panel, v) coordinates: each half-panel becomes a unit interval
  // laid end to end on the real line, so one adaptive pass covers them all.
  struct Half {
    Scalar anchor, span;  // x = anchor + span * v^(1/alpha), span may be negative
  };
  std::vector<Half> halves;
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const Scalar mid = (ends[i] + ends[i + 1]) / 2;
    halves.push_back({ends[i], mid - ends[i]});
    halves.push_back({ends[i + 1], mid - ends[i + 1]});
  }
  const Scalar inv_alpha = Scalar(1) / alpha;
  const auto mapped = [&](Scalar s) {
    const auto idx = std::min<std::size_t>(std::size_t(s), halves.size() - 1);
    const Scalar v = s - Scalar(idx);
    if (!(v > Scalar(0))) return Scalar(0);
    const auto& h = halves[idx];
    using std::abs;
    using std::pow;
    const Scalar x = h.anchor + h.span * pow(v, inv_alpha);
    const Scalar jac = abs(h.span) * inv_alpha * pow(v, inv_alpha - Scalar(1));
    return diff(x) * jac;
  };
  std::vector<Scalar> unit_breaks(halves.size() + 1);
  for (std::size_t i = 0; i < unit_breaks.size(); ++i) unit_breaks[i] = Scalar(i);
  return integrate_adaptive<Scalar>(mapped, unit_breaks, tol);
}

/// Total variation between Beta_alpha(I1) and Beta_alpha(I2).
///
/// alpha = 1 uses the closed form 1 - |I1 cap I2| / max(|I1|, |I2|).
/// Point masses: 0 against the same point, 1 against anything else.
template <typename Scalar>
Scalar beta_interval_tv(Scalar alpha, const BasicInterval<Scalar>& I1, const BasicInterval<Scalar>& I2,
                        Scalar tol = Scalar(1e-9))
{
  if (!(alpha > Scalar(0))) throw SimplexError("beta_interval_tv: alpha must be positive");
  if (!(tol > Scalar(0)) || tol > Scalar(1e-4)) {
    throw SimplexError("beta_interval_tv: tolerance must lie in (0, 1e-4]");
  }
  if (I1.degenerate() || I2.degenerate()) {
    return (I1.degenerate() && I2.degenerate() && I1.lo == I2.lo) ? Scalar(0) : Scalar(1);
  }
  if (I1 == I2) return Scalar(0);
  if (alpha == Scalar(1)) {
    return Scalar(1) - overlap(I1, I2) / std::max(I1.length(), I2.length());
  }
  const Scalar v = beta_interval_tv_quadrature(alpha, I1, I2, tol).value;
  return std::clamp(v, Scalar(0), Scalar(1));
}

/// Proxy for the non-sticking probability of the maximal coupling:
/// min(midpoint_gap / max(grad_low, grad_high), 1).
template <typename Scalar>
Scalar sticking_ratio_Q(Scalar grad_low, Scalar grad_high, Scalar midpoint_gap)
{
  if (!(midpoint_gap > Scalar(0))) return Scalar(0);
  const Scalar g = std::max(grad_low, grad_high);
  if (!(g > Scalar(0))) return Scalar(1);
  return std::min(midpoint_gap / g, Scalar(1));
}

struct IntervalPair {
  Interval first;
  Interval second;
};

/// Ordered pairs (l1 <= l2, r1 <= r2) with I1 = [0, 1]; translation and
/// dilation invariance make the base interval irrelevant. The identical
/// pair is excluded.
inline std::vector<IntervalPair> ordered_interval_pairs()
{
  const double lefts[] = {0.0, 0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.99};
  const double rights[] = {1.0, 1.001, 1.01, 1.1, 1.5, 2.0, 4.0};
  std::vector<IntervalPair> out;
  for (double l : lefts) {
    for (double r : rights) {
      if (l == 0.0 && r == 1.0) continue;
      out.push_back({{0.0, 1.0}, {l, r}});
    }
  }
  return out;
}

/// max(|l2 - l1|, |r2 - r1|) / max(|I1|, |I2|).
inline double displacement_ratio(const Interval& a, const Interval& b)
{
  return std::max(std::abs(b.lo - a.lo), std::abs(b.hi - a.hi)) / std::max(a.length(), b.length());
}

}  // namespace simplexwalk
