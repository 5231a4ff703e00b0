#pragma once

#include <cstdint>
#include <span>

namespace barron {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Upper bound ln(sqrt(2 pi) x^{x-1/2} e^{-x + 1/(12x)}) >= ln Gamma(x), x > 0.
double stirling_log_gamma_upper(double x);

/// Optimal Khintchine constant for Rademacher sums,
/// C_p = sqrt(2 pi^{-1/p}) Gamma((p+1)/2)^{1/p}, p >= 2.
double khintchine_constant(double p);

struct KhintchineCheck {
  double p = 2.0;
  double c_p = 1.0;
  double bound = 1.0;   // sqrt(p/2)
  double margin = 0.0;  // bound - c_p
};

KhintchineCheck khintchine_check(double p);

/// ln(C_p / sqrt(p)); nonincreasing in p on [2, 7/3].
double khintchine_log_ratio(double p);

/// (E|sum c_i tau_i|^p)^{1/p} over independent Rademacher signs tau_i.
/// Exact mode enumerates all 2^|c| sign vectors (|c| <= 20); otherwise
/// `samples` random sign vectors drawn from `seed` are averaged.
double khintchine_bruteforce(std::span<const double> c, double p, bool exact = true,
                             std::uint64_t seed = 0, std::size_t samples = 100000);

}  // namespace barron
