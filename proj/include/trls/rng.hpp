#pragma once

#include <cstdint>
#include <random>

namespace trls {

/// SplitMix64 mixing step. Used to turn (master seed, stream indices) into
/// well-separated 64-bit seeds for independent generators.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the substream identified by (a, b) under `master`. Trial k of
/// grid cell c draws from derive_seed(master, c, k); the sampler never
/// shares a stream between tasks, so parallel runs reproduce serial ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Seeded draw source for the samplers: a mt19937_64 engine plus the
/// distributions the synthesizers need. All draws are deterministic given
/// the seed and the call sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() { return uniform_(engine_); }              // [0, 1)
  double normal() { return normal_(engine_); }                // N(0, 1)
  double gamma(double shape, double scale);
  double chi_square(double dof) { return gamma(0.5 * dof, 2.0); }
  double student_t(double dof);
  double pareto(double alpha);                                // support [1, inf)

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace trls
