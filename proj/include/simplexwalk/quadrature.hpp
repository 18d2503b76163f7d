#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "simplexwalk/error.hpp"

namespace simplexwalk {

template <typename Scalar>
struct QuadratureResult {
  Scalar value = Scalar(0);
  Scalar error = Scalar(0);
  long panels = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar>
struct Panel {
  Scalar lo, hi, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> kronrod_panel(const F& f, Scalar lo, Scalar hi)
{
  const Scalar center = (lo + hi) / 2;
  const Scalar half = (hi - lo) / 2;
  const Scalar fc = f(center);
  Scalar kronrod = fc * Scalar(kKronrodWeights[7]);
  Scalar gauss = fc * Scalar(kGaussWeights[3]);
  for (int i = 0; i < 7; ++i) {
    const Scalar dx = half * Scalar(kKronrodNodes[i]);
    const Scalar sum = f(center - dx) + f(center + dx);
    kronrod += Scalar(kKronrodWeights[i]) * sum;
    if (i % 2 == 1) gauss += Scalar(kGaussWeights[i / 2]) * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over a union of panels.
///
/// `breaks` must be sorted; the integrand is integrated on each consecutive
/// pair. The panel with the largest error estimate is bisected until the
/// summed estimate drops below `tol`. Throws once `max_panels` is exceeded.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_adaptive(const F& f, const std::vector<Scalar>& breaks, Scalar tol,
                                            long max_panels = 1'000'000)
{
  std::priority_queue<detail::Panel<Scalar>> queue;
  Scalar total = Scalar(0);
  Scalar error = Scalar(0);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto p = detail::kronrod_panel<Scalar>(f, breaks[i], breaks[i + 1]);
    total += p.value;
    error += p.error;
    queue.push(p);
  }
  long panels = long(queue.size());
  while (error > tol) {
    if (panels >= max_panels) {
      throw SimplexError("integrate_adaptive: tolerance " + std::to_string(double(tol)) +
                         " not reached within " + std::to_string(max_panels) +
                         " panels (error estimate " + std::to_string(double(error)) + ")");
    }
    const auto worst = queue.top();
    queue.pop();
    const Scalar mid = (worst.lo + worst.hi) / 2;
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw SimplexError("integrate_adaptive: panel collapsed to machine resolution");
    }
    const auto left = detail::kronrod_panel<Scalar>(f, worst.lo, mid);
    const auto right = detail::kronrod_panel<Scalar>(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  // Re-sum to shed the drift of the incremental updates.
  total = Scalar(0);
  error = Scalar(0);
  while (!queue.empty()) {
    total += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {total, error, panels};
}

}  // namespace simplexwalk
