#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexwalk/error.hpp"
#include "simplexwalk/simplex_core.hpp"

namespace simplexwalk {

/// lambda_j = 1 - cos(j pi / N), the decay rate of the j-th sine mode.
template <typename Scalar = double>
Scalar eigenvalue(int j, int n)
{
  if (n < 2 || j < 1 || j > n - 1) {
    throw SimplexError("eigenvalue: need 1 <= j <= n-1, got j=" + std::to_string(j) +
                       " n=" + std::to_string(n));
  }
  using std::cos;
  return Scalar(1) - cos(Scalar(j) * std::numbers::pi_v<Scalar> / Scalar(n));
}

template <typename Scalar = double>
Scalar spectral_gap(int n)
{
  return eigenvalue<Scalar>(1, n);
}

/// f^{(j)}(x) = sum_k sin(j pi k / N) (x_k - k). j = 1 is the gap eigenfunction.
template <typename Scalar>
Scalar eigen_stat(int j, const BasicConfiguration<Scalar>& c)
{
  const int n = c.n();
  if (j < 1 || j > n - 1) {
    throw SimplexError("eigen_stat: mode " + std::to_string(j) + " out of range for n=" +
                       std::to_string(n));
  }
  using std::sin;
  Scalar acc = Scalar(0);
  const Scalar w = Scalar(j) * std::numbers::pi_v<Scalar> / Scalar(n);
  for (int k = 1; k < n; ++k) acc += sin(w * Scalar(k)) * (c[k] - Scalar(k));
  return acc;
}

/// Orthonormal sine basis, column j-1 holds phi_j(k) = sqrt(2/N) sin(j k pi / N).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sine_basis(int n)
{
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix phi(n - 1, n - 1);
  using std::sin;
  using std::sqrt;
  const Scalar scale = sqrt(Scalar(2) / Scalar(n));
  const Scalar w = std::numbers::pi_v<Scalar> / Scalar(n);
  for (int k = 1; k < n; ++k)
    for (int j = 1; j < n; ++j) phi(k - 1, j - 1) = scale * sin(w * Scalar(j * k % (2 * n)));
  return phi;
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues(int n)
{
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lambda(n - 1);
  for (int j = 1; j < n; ++j) lambda[j - 1] = eigenvalue<Scalar>(j, n);
  return lambda;
}

/// Exact mean E[X_k(t)] of the walk started from x0, one row per time.
///
/// The centred profile a(t, k) = E[X_k(t)] - k solves d/dt a = (1/2) Delta a
/// with zero boundary values, so each sine coefficient decays at rate lambda_j.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> heat_mean_curve(
    const BasicConfiguration<Scalar>& x0, const std::vector<Scalar>& times)
{
  if (!x0.pinned()) throw SimplexError("heat_mean_curve: pinned configurations only");
  const int n = x0.n();
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto phi = sine_basis<Scalar>(n);
  const Vector k = Vector::LinSpaced(n - 1, Scalar(1), Scalar(n - 1));
  const Vector coeffs = phi.transpose() * (x0.positions() - k);
  const Vector lambda = eigenvalues<Scalar>(n);

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(times.size(), n - 1);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < Scalar(0)) throw SimplexError("heat_mean_curve: negative time");
    const Vector decayed = coeffs.cwiseProduct((-lambda * times[i]).array().exp().matrix());
    out.row(Eigen::Index(i)) = (phi * decayed + k).transpose();
  }
  return out;
}

/// Spectral gap of the mean-field exchange process, (alpha N + 1) / ((2 alpha + 1) N).
template <typename Scalar = double>
Scalar meanfield_gap(int n, Scalar alpha)
{
  if (n < 2 || !(alpha > Scalar(0))) throw SimplexError("meanfield_gap: need n >= 2, alpha > 0");
  return (alpha * Scalar(n) + Scalar(1)) / ((2 * alpha + Scalar(1)) * Scalar(n));
}

/// sum_i eta_i^2, the mean-field eigenfunction up to an additive constant.
template <typename Derived>
typename Derived::Scalar meanfield_stat(const Eigen::MatrixBase<Derived>& eta)
{
  return eta.squaredNorm();
}

/// pi_{N,alpha}(sum eta_i^2) = N^2 (alpha + 1) / (N alpha + 1), from the
/// Dirichlet second moment.
template <typename Scalar = double>
Scalar meanfield_stat_equilibrium(int n, Scalar alpha)
{
  return Scalar(n) * Scalar(n) * (alpha + Scalar(1)) / (Scalar(n) * alpha + Scalar(1));
}

struct DecayFit {
  double rate = 0.0;
  double standard_error = 0.0;
  double window_begin = 0.0;
  double window_end = 0.0;
  int points = 0;
};

/// Weighted least squares of log(mean) against t, returning the decay rate.
///
/// The window runs from the first point up to (excluding) the first point
/// whose mean is not above 5 standard errors. Weights are mean^2 / se^2, the
/// inverse variance of log(mean). Points with se = 0 are exact: a single
/// exact time pins the intercept, two or more are fitted on their own.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& means,
                        const std::vector<double>& standard_errors);

}  // namespace simplexwalk
