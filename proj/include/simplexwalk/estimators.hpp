#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexwalk/dynamics.hpp"
#include "simplexwalk/simplex_core.hpp"

namespace simplexwalk {

struct EstimateWithError {
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo means of several statistics on a time grid.
struct MeanProfile {
  std::vector<double> times;
  Eigen::MatrixXd mean;  // rows: times, columns: statistics
  Eigen::MatrixXd standard_error;
  std::uint64_t replicas = 0;
};

/// Stream-family tags; see mix_seed.
namespace stream_tag {
inline constexpr std::uint64_t trajectory = 1;
inline constexpr std::uint64_t equilibrium = 2;
inline constexpr std::uint64_t censored = 3;
inline constexpr std::uint64_t uncensored = 4;
inline constexpr std::uint64_t coalescence = 16;  // + group index
}  // namespace stream_tag

/// Binomial standard error sqrt(p (1 - p) / reps).
double binomial_se(double p, std::uint64_t reps);

/// Means of f^{(j)}(X(t)) for each requested mode, started from `start`.
MeanProfile eigen_decay_profile(const Configuration& start, double alpha, const std::vector<int>& modes,
                                const std::vector<double>& times, std::uint64_t reps, std::uint64_t seed);

/// Means of every coordinate X_k(t), k = 1..N-1.
MeanProfile coordinate_mean_profile(const Configuration& start, double alpha, const std::vector<double>& times,
                                    std::uint64_t reps, std::uint64_t seed);

/// Means of the centred mean-field statistic sum eta^2 - pi(sum eta^2),
/// started from eta = (N, 0, ..., 0).
MeanProfile meanfield_decay_profile(int n, double alpha, const std::vector<double>& times, std::uint64_t reps,
                                    std::uint64_t seed);

/// Wilson witness P(X(t) in B_t) - pi(B_t) with
/// B_t = {f_N >= (1/2) mean f_N(X(0)) e^{-gap t}}, X(0) from the Wilson
/// initial law. Clamped to [0, 1].
EstimateWithError tv_lower_witness(int n, double alpha, double t, std::uint64_t reps, std::uint64_t seed);
std::vector<EstimateWithError> tv_lower_witness_profile(int n, double alpha, const std::vector<double>& times,
                                                        std::uint64_t reps, std::uint64_t seed);

/// P[tau > t] for the two-phase coupling of `start` against equilibrium,
/// phase one lasting min(t/2, 4 log N / gap).
EstimateWithError tv_upper_coupling(int n, double alpha, double t, const Configuration& start,
                                    std::uint64_t reps, std::uint64_t seed);
std::vector<EstimateWithError> tv_upper_coupling_profile(int n, double alpha, const std::vector<double>& times,
                                                         const Configuration& start, std::uint64_t reps,
                                                         std::uint64_t seed);

struct LevelCrossing {
  double level = 0.0;
  std::optional<double> lower;  // first crossing of the witness column
  std::optional<double> upper;  // first crossing of the coalescence column
};

struct MixingProfile {
  std::vector<double> times;
  std::vector<EstimateWithError> lower;
  std::vector<EstimateWithError> upper;
  std::vector<LevelCrossing> crossings;  // levels 0.75, 0.5, 0.25
};

/// First time the column drops to `level`, by linear interpolation between
/// grid points. nullopt if it never does.
std::optional<double> crossing_time(const std::vector<double>& times, const std::vector<EstimateWithError>& column,
                                    double level);

/// Lower (Wilson witness) and upper (coalescence from the top configuration)
/// bracket of d_N(t) on a grid.
MixingProfile mixing_profile(int n, double alpha, const std::vector<double>& times, std::uint64_t reps,
                             std::uint64_t seed);

using Statistic = std::function<double(const Configuration&)>;

/// Registry of monotone statistics: "x<k>", "f" (the gap eigenfunction),
/// "ge:x<k>:<c>" (indicator x_k >= c) and "neg:<name>" (the negation, a
/// decreasing statistic). Throws on unknown names.
Statistic statistic_by_name(const std::string& name, int n);

/// Covariance of two statistics under pi_{N,alpha}, delete-one jackknife error.
EstimateWithError fkg_correlation(int n, double alpha, const std::string& f, const std::string& g,
                                  std::uint64_t reps, std::uint64_t seed);

/// u_i = floor(i N / K), i = 1..K-1.
std::vector<int> special_particles(int n, int K);

struct CoordinateDifferences {
  Eigen::VectorXd difference;  // E_censored[x_k] - E_uncensored[x_k], k = 1..N-1
  Eigen::VectorXd standard_error;
  std::uint64_t replicas = 0;
};

/// From the top configuration, censored (special particles frozen) minus
/// uncensored coordinate means at time t, independent noise for the two.
CoordinateDifferences censoring_domination(int n, double alpha, int K, double t, std::uint64_t reps,
                                           std::uint64_t seed);
CoordinateDifferences censoring_domination(int n, double alpha, const CensorScheme& censor, double t,
                                           std::uint64_t reps, std::uint64_t seed);

/// P[X_{floor(N/2)}(t) >= N/2 + 1] from the top configuration.
EstimateWithError separation_witness(int n, double alpha, double t, std::uint64_t reps, std::uint64_t seed);
std::vector<EstimateWithError> separation_witness_profile(int n, double alpha, const std::vector<double>& times,
                                                          std::uint64_t reps, std::uint64_t seed);
/// The same probability under pi_{N,alpha}.
EstimateWithError separation_equilibrium(int n, double alpha, std::uint64_t reps, std::uint64_t seed);

struct MomentEstimate {
  EstimateWithError mean;
  EstimateWithError variance;
};

/// Moments of W = sum_i (x_{u_i} - u_i) over the special particles, from the
/// top configuration at time t.
MomentEstimate special_particle_W(int n, double alpha, int K, double t, std::uint64_t reps, std::uint64_t seed);

struct WilsonMoments {
  std::vector<double> times;
  std::vector<int> modes;
  /// [time][mode]
  std::vector<std::vector<MomentEstimate>> moments;
};

/// Mean and variance of f^{(j)}(X(t)) from the Wilson initial law.
WilsonMoments wilson_moments(int n, double alpha, const std::vector<int>& modes, const std::vector<double>& times,
                             std::uint64_t reps, std::uint64_t seed);

}  // namespace simplexwalk
