#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexwalk/error.hpp"
#include "simplexwalk/random.hpp"

namespace simplexwalk {

/// Ordered particle positions x_1 <= ... <= x_{N-1} on [0, N].
///
/// Pinned configurations live in Omega_N (x_0 = 0 and x_N = N implicit).
/// Unpinned configurations store a free right endpoint x_N as an extra last
/// coordinate; the dynamics never move it.
template <typename Scalar>
class BasicConfiguration {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicConfiguration() = default;

  BasicConfiguration(int n, Vector positions, bool pinned = true)
      : n_(n), pinned_(pinned), positions_(std::move(positions))
  {
    if (n < 2) throw SimplexError("configuration needs n >= 2, got " + std::to_string(n));
    const Eigen::Index expected = pinned ? n - 1 : n;
    if (positions_.size() != expected) {
      throw SimplexError("configuration of size n=" + std::to_string(n) + " expects " +
                         std::to_string(expected) + " stored coordinates, got " +
                         std::to_string(positions_.size()));
    }
  }

  /// Maximal configuration (N, ..., N).
  static BasicConfiguration top(int n)
  {
    return BasicConfiguration(n, Vector::Constant(n - 1, Scalar(n)));
  }

  /// Minimal configuration (0, ..., 0).
  static BasicConfiguration bottom(int n) { return BasicConfiguration(n, Vector::Zero(n - 1)); }

  /// Equilibrium mean x_k = k.
  static BasicConfiguration linear(int n)
  {
    return BasicConfiguration(n, Vector::LinSpaced(n - 1, Scalar(1), Scalar(n - 1)));
  }

  int n() const noexcept { return n_; }
  bool pinned() const noexcept { return pinned_; }
  /// Number of mobile particles, N - 1.
  int sites() const noexcept { return n_ - 1; }

  const Vector& positions() const noexcept { return positions_; }
  Vector& positions() noexcept { return positions_; }

  /// Right boundary x_N.
  Scalar right() const noexcept { return pinned_ ? Scalar(n_) : positions_[n_ - 1]; }

  /// x_k for k in [0, N], with the boundary conventions applied.
  Scalar operator[](int k) const noexcept
  {
    if (k <= 0) return Scalar(0);
    if (k >= n_) return right();
    return positions_[k - 1];
  }

  /// Resampling-interval length x_{k+1} - x_{k-1}.
  Scalar gradient(int k) const noexcept { return (*this)[k + 1] - (*this)[k - 1]; }

  friend bool operator==(const BasicConfiguration& a, const BasicConfiguration& b)
  {
    return a.n_ == b.n_ && a.pinned_ == b.pinned_ && a.positions_ == b.positions_;
  }

 private:
  int n_ = 2;
  bool pinned_ = true;
  Vector positions_ = Vector::Constant(1, Scalar(1));
};

using Configuration = BasicConfiguration<double>;

template <typename Scalar>
struct BasicIncrements {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eta;
};
using Increments = BasicIncrements<double>;

struct Violation {
  int index;  // 0-based index into the stored coordinates
  double magnitude;
  std::string what;
};

struct OrderRelation {
  bool coordinate_le = false;
  bool coordinate_ge = false;
  bool gradient_le = false;
  bool gradient_ge = false;

  bool coordinate_incomparable() const noexcept { return !coordinate_le && !coordinate_ge; }
  bool gradient_incomparable() const noexcept { return !gradient_le && !gradient_ge; }
};

/// Absolute tolerance on sum(eta) = N for pinned configurations.
inline double pinned_sum_tolerance(int n) { return 1e-9 * n; }

template <typename Scalar>
std::vector<Violation> validate(const BasicConfiguration<Scalar>& c)
{
  std::vector<Violation> out;
  const auto& x = c.positions();
  Scalar prev = Scalar(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar v = x[i];
    if (!std::isfinite(static_cast<double>(v))) {
      out.push_back({int(i), static_cast<double>(v), "non-finite coordinate"});
      continue;
    }
    if (v < Scalar(0)) out.push_back({int(i), static_cast<double>(-v), "negative coordinate"});
    if (i > 0 && v < prev) {
      out.push_back({int(i), static_cast<double>(prev - v), "order broken: x_k < x_{k-1}"});
    }
    prev = v;
  }
  if (c.pinned() && x.size() > 0) {
    const Scalar last = x[x.size() - 1];
    if (last > Scalar(c.n())) {
      out.push_back({int(x.size() - 1), static_cast<double>(last - Scalar(c.n())),
                     "coordinate exceeds N"});
    }
  }
  return out;
}

template <typename Scalar>
bool is_valid(const BasicConfiguration<Scalar>& c)
{
  return validate(c).empty();
}

/// eta_k = x_k - x_{k-1}, k = 1..N (N entries in both state spaces).
template <typename Scalar>
BasicIncrements<Scalar> increments(const BasicConfiguration<Scalar>& c)
{
  const int n = c.n();
  BasicIncrements<Scalar> out{Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(n)};
  for (int k = 1; k <= n; ++k) out.eta[k - 1] = c[k] - c[k - 1];
  return out;
}

/// Cumulative left-to-right sums of eta. Pinned input needs N entries summing
/// to N; unpinned input stores the total as the free endpoint.
template <typename Scalar>
BasicConfiguration<Scalar> from_increments(int n, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& eta,
                                           bool pinned = true)
{
  if (eta.size() != n) {
    throw SimplexError("from_increments: expected " + std::to_string(n) + " increments, got " +
                       std::to_string(eta.size()));
  }
  for (int k = 0; k < n; ++k) {
    if (!(eta[k] >= Scalar(0))) {
      throw SimplexError("from_increments: negative increment at index " + std::to_string(k));
    }
  }
  typename BasicConfiguration<Scalar>::Vector x(pinned ? n - 1 : n);
  Scalar acc = Scalar(0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    acc += eta[k];
    x[k] = acc;
  }
  if (pinned) {
    const Scalar total = acc + eta[n - 1];
    if (std::abs(static_cast<double>(total) - n) > pinned_sum_tolerance(n)) {
      throw SimplexError("from_increments: pinned increments sum to " +
                         std::to_string(static_cast<double>(total)) + ", expected " +
                         std::to_string(n));
    }
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = std::min(x[k], Scalar(n));
  }
  return BasicConfiguration<Scalar>(n, std::move(x), pinned);
}

template <typename Scalar>
OrderRelation compare(const BasicConfiguration<Scalar>& a, const BasicConfiguration<Scalar>& b,
                      Scalar tol = Scalar(0))
{
  if (a.n() != b.n() || a.pinned() != b.pinned()) {
    throw SimplexError("compare: configurations differ in size or pinning");
  }
  OrderRelation r{true, true, true, true};
  for (int k = 1; k <= a.n(); ++k) {
    if (k < a.n() || !a.pinned()) {
      if (a[k] > b[k] + tol) r.coordinate_le = false;
      if (b[k] > a[k] + tol) r.coordinate_ge = false;
    }
    const Scalar ea = a[k] - a[k - 1];
    const Scalar eb = b[k] - b[k - 1];
    if (ea > eb + tol) r.gradient_le = false;
    if (eb > ea + tol) r.gradient_ge = false;
  }
  return r;
}

namespace detail {

// N * g_k / sum(g) for `count` Gamma(alpha, 1) variables, zero-padded to n.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> scaled_dirichlet(int n, int count, double alpha,
                                                          Stream& rng)
{
  if (alpha <= 0.0) throw SimplexError("Dirichlet sampling needs alpha > 0");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    double sum = 0.0;
    for (int k = 0; k < count; ++k) {
      g[k] = rng.gamma(alpha);
      sum += g[k];
    }
    if (sum > 0.0) return (g * (double(n) / sum)).template cast<Scalar>();
  }
  throw SimplexError("Dirichlet sampling: gamma sum vanished 100 times in a row");
}

template <typename Scalar>
BasicConfiguration<Scalar> pinned_from_partial(int n, int k,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& eta)
{
  typename BasicConfiguration<Scalar>::Vector x(n - 1);
  Scalar acc = Scalar(0);
  for (int i = 0; i < n - 1; ++i) {
    acc += eta[i];
    x[i] = (i + 1 >= k) ? Scalar(n) : std::min(acc, Scalar(n));
  }
  return BasicConfiguration<Scalar>(n, std::move(x));
}

}  // namespace detail

/// Exact draw from pi_{N,alpha}.
template <typename Scalar = double>
BasicConfiguration<Scalar> sample_equilibrium(int n, double alpha, Stream& rng)
{
  if (n < 2) throw SimplexError("sample_equilibrium needs n >= 2");
  return detail::pinned_from_partial<Scalar>(n, n, detail::scaled_dirichlet<Scalar>(n, n, alpha, rng));
}

/// pi_{k,alpha}: the first k increments are a scaled Dirichlet summing to N,
/// the rest vanish, so x_j = N for every j >= k.
template <typename Scalar = double>
BasicConfiguration<Scalar> sample_pinned_equilibrium(int k, int n, double alpha, Stream& rng)
{
  if (n < 2 || k < 1 || k > n) {
    throw SimplexError("sample_pinned_equilibrium needs 1 <= k <= n, got k=" + std::to_string(k) +
                       " n=" + std::to_string(n));
  }
  return detail::pinned_from_partial<Scalar>(n, k, detail::scaled_dirichlet<Scalar>(n, k, alpha, rng));
}

/// Wilson-statistic initial condition: the mass sits on the first floor(N/2)
/// increments, so E[x_k] = min(2k, N) and x_{floor(N/2)} = N.
template <typename Scalar = double>
BasicConfiguration<Scalar> sample_wilson_initial(int n, double alpha, Stream& rng)
{
  if (n < 2) throw SimplexError("sample_wilson_initial needs n >= 2");
  return sample_pinned_equilibrium<Scalar>(n / 2, n, alpha, rng);
}

}  // namespace simplexwalk
