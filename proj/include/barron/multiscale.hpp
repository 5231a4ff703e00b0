#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace barron {

using ScalarFn = std::function<double(double)>;

/// alpha_{0,j} = g(j); alpha_{l,j} = g(2^{-l} j) - g(2^{1-l} floor(j/2)) for l >= 1.
/// Exactly zero for l >= 1 and even j.
double multiscale_coeff(const ScalarFn& g, int l, std::int64_t j);

/// Closed integer interval [lo, hi]; empty when hi < lo.
struct IndexRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::int64_t count() const { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(std::int64_t j) const { return j >= lo && j <= hi; }
};

/// Truncated dyadic expansion g_m(t) = sum_{l<=m} sum_j alpha_{l,j} chi_[0,1)(2^l t - j),
/// materialised for t in [window.lo, window.hi + 1).
class MultiscaleExpansion {
 public:
  MultiscaleExpansion(ScalarFn g, int m, IndexRange window);

  int level() const { return m_; }
  IndexRange window() const { return window_; }
  /// Indices stored at level l.
  IndexRange indices(int l) const;
  double coeff(int l, std::int64_t j) const;
  std::size_t coefficient_count() const;

  /// Throws DomainError outside the window.
  double operator()(double t) const;

 private:
  int m_;
  IndexRange window_;
  std::vector<std::vector<double>> coeffs_;  // coeffs_[l][j - indices(l).lo]
};

MultiscaleExpansion truncated(const ScalarFn& g, int m, IndexRange window);

/// Indices j with 2^l (xi . x + theta) - j in [0, 1) for some x in [0,1]^d.
IndexRange active_indices(std::span<const double> xi, int l, double theta);

}  // namespace barron
