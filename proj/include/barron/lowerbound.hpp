#pragma once

#include <span>
#include <string>

#include "barron/netcore.hpp"
#include "barron/pwl.hpp"
#include "barron/spectral.hpp"

namespace barron {

/// f(x) = n^{-s} cos(2 pi n x_1) exp(-pi |x|^2 / R) with n = 2^{L+2} N^L.
struct Witness {
  int L = 1;
  int N = 1;
  double n = 8.0;
  double s = 0.5;
  double R = 1.0;
  int d = 2;
  double eps = 0.1;
};

/// R is the smallest value meeting both
///   n^{-s} (n + d/(pi sqrt R))^s <= 1 + eps   (spectral seminorm control)
///   exp(-pi d / R) >= 1 - eps                 (envelope on the cube)
Witness make_witness(int L, int N, double s, double eps, int d = 2);

double eval_witness(const Witness& w, std::span<const double> x);

/// n^{-s} (n + d/(pi sqrt R))^s.
double witness_seminorm_bound(const Witness& w);

/// Intervals [j/n, (j+1)/n] on which `line` does not take both signs.
int sign_stable_count(const PiecewiseLinear& line, int n);

/// n - 2^{L+1} N^L.
int stable_count_floor(const Witness& w);

/// (1 - eps) / (pi n^{s+1}): L^1 mass of the witness over one half-wave.
double per_interval_lower(const Witness& w);

/// (1 - eps) / (4 sqrt 2 pi N^{sL}).
double certified_rate_bound(const Witness& w);

struct IntervalLowerBound {
  double lower = 0.0;       // L^1(cube) lower bound estimate
  int min_stable = 0;       // fewest stable intervals over the lines
  double min_line_lower = 0.0;  // min_stable * per_interval_lower
  std::size_t lines = 0;
};

/// Restricts `net` to the x_1-lines through the midpoints of a `grid`^{d-1}
/// grid of the remaining coordinates, counts sign-stable intervals on each
/// and averages the per-interval bound.
IntervalLowerBound interval_l1_lower(const Witness& w, const ReluNetwork& net, int grid = 8);

/// Atomic stand-in for the witness: its Gaussian spectrum sampled on a grid
/// of spacing sigma/`per_sigma` (sigma = 1/sqrt(2 pi R)) and truncated at
/// `width` sigma around +-n e_1.
SpectralMeasure witness_surrogate(const Witness& w, int per_sigma = 4, double width = 6.0);

}  // namespace barron
