#pragma once

#include <cstdint>
#include <random>

namespace simplexwalk {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the private stream owned by one replica.
///
/// seed = splitmix64(master ^ splitmix64(tag ^ splitmix64(index)))
///
/// `tag` separates independent families of draws inside one experiment
/// (trajectories vs. equilibrium samples, censored vs. uncensored runs).
/// The function is part of the reproducibility contract; changing it changes
/// every output byte.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t tag = 0) noexcept
{
  return splitmix64(master ^ splitmix64(tag ^ splitmix64(index)));
}

/// A random stream: a 64-bit Mersenne twister plus the handful of draws the
/// simulator needs. Never share one stream between threads.
class Stream {
 public:
  using engine_type = std::mt19937_64;

  explicit Stream(std::uint64_t seed) : engine_(seed) {}
  Stream(std::uint64_t master, std::uint64_t index, std::uint64_t tag = 0)
      : engine_(mix_seed(master, index, tag))
  {
  }

  engine_type& engine() noexcept { return engine_; }

  /// Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }

  /// Exponential waiting time with the given rate.
  double exponential(double rate)
  {
    return exponential_(engine_, std::exponential_distribution<double>::param_type(rate));
  }

  /// Gamma(shape, 1).
  double gamma(double shape)
  {
    return gamma_(engine_, std::gamma_distribution<double>::param_type(shape, 1.0));
  }

  /// Symmetric Beta(alpha, alpha) on [0, 1], as g1 / (g1 + g2).
  double symmetric_beta(double alpha)
  {
    for (;;) {
      const double g1 = gamma(alpha);
      const double g2 = gamma(alpha);
      const double s = g1 + g2;
      if (s > 0.0) {
        const double u = g1 / s;
        return u > 1.0 ? 1.0 : u;
      }
    }
  }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi)
  {
    return int_(engine_, std::uniform_int_distribution<int>::param_type(lo, hi));
  }

 private:
  engine_type engine_;
  std::exponential_distribution<double> exponential_;
  std::gamma_distribution<double> gamma_;
  std::uniform_int_distribution<int> int_;
};

}  // namespace simplexwalk
