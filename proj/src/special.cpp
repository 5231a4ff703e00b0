#include "barron/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "barron/errors.hpp"
#include "barron/rng.hpp"

namespace barron {

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return std::lgamma(x);
}

double stirling_log_gamma_upper(double x) {
  if (!(x > 0.0)) throw DomainError("stirling_log_gamma_upper: argument must be positive");
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x - 0.5) * std::log(x) - x + 1.0 / (12.0 * x);
}

double khintchine_constant(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) {
    throw DomainError("khintchine_constant: p must be >= 2, got " + std::to_string(p));
  }
  return std::exp(0.5 * (std::numbers::ln2 - std::log(std::numbers::pi) / p) +
                  log_gamma(0.5 * (p + 1.0)) / p);
}

KhintchineCheck khintchine_check(double p) {
  KhintchineCheck out;
  out.p = p;
  out.c_p = khintchine_constant(p);
  out.bound = std::sqrt(0.5 * p);
  out.margin = out.bound - out.c_p;
  return out;
}

double khintchine_log_ratio(double p) {
  return std::log(khintchine_constant(p) / std::sqrt(p));
}

double khintchine_bruteforce(std::span<const double> c, double p, bool exact,
                             std::uint64_t seed, std::size_t samples) {
  if (!(p >= 1.0)) throw DomainError("khintchine_bruteforce: p must be >= 1");
  if (c.empty()) return 0.0;
  if (exact) {
    if (c.size() > 20) {
      throw DomainError("khintchine_bruteforce: exact mode supports at most 20 coefficients");
    }
    const std::uint64_t total = std::uint64_t{1} << c.size();
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      double sum = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) sum += (mask >> i & 1U) ? c[i] : -c[i];
      acc += std::pow(std::abs(sum), p);
    }
    return std::pow(acc / static_cast<double>(total), 1.0 / p);
  }
  if (samples == 0) throw DomainError("khintchine_bruteforce: need at least one sample");
  Rng rng(seed);
  double acc = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    double sum = 0.0;
    for (double ci : c) sum += (rng.next_u64() >> 63) ? ci : -ci;
    acc += std::pow(std::abs(sum), p);
  }
  return std::pow(acc / static_cast<double>(samples), 1.0 / p);
}

}  // namespace barron
