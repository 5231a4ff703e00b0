#include "barron/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace barron {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

Rng Rng::split(std::uint64_t key) const {
  return Rng(mix64(seed_ ^ mix64(key + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  // (k + 0.5) / 2^53 never hits either endpoint
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::categorical(std::span<const double> cumulative_weights) {
  if (cumulative_weights.empty() || !(cumulative_weights.back() > 0.0)) {
    throw std::invalid_argument("categorical: empty or zero-mass weights");
  }
  const double u = uniform() * cumulative_weights.back();
  auto it = std::upper_bound(cumulative_weights.begin(), cumulative_weights.end(), u);
  if (it == cumulative_weights.end()) --it;
  return static_cast<std::size_t>(it - cumulative_weights.begin());
}

std::uint64_t Rng::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geometric: q must lie in (0,1)");
  // P(K >= k) = q^k  <=>  K = floor(ln U / ln q)
  return static_cast<std::uint64_t>(std::floor(std::log(uniform_open()) / std::log(q)));
}

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace barron
