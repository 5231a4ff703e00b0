#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace barron {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seeded, splittable random source.
///
/// All randomness in the library flows through an explicitly passed Rng.
/// `split(key)` derives a child stream whose output depends only on the
/// parent seed and the key, never on how much of the parent was consumed,
/// so concurrent tasks can be handed independent, reproducible streams.
/// Draws are computed from raw engine bits (no std distributions), which
/// keeps sequences identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t key) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Index drawn with probability proportional to `weights[i]`.
  std::size_t categorical(std::span<const double> cumulative_weights);
  /// P(k) = (1 - q) q^k, k = 0, 1, 2, ...
  std::uint64_t geometric(double q);
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace barron
