#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace cafda {

/// Mixes a base seed with a lineage path, e.g. (seed, epoch, sample_index, stream).
/// Equal inputs give equal outputs on every platform.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept;

/// Seeded generator. Draws are computed here rather than through <random>
/// distributions, whose output differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double gamma(double shape);
  double beta(double a, double b);
  std::vector<double> dirichlet(std::size_t k, double concentration);
  std::int64_t poisson(double lambda);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cafda
