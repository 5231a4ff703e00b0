#pragma once

#include <functional>
#include <vector>

namespace barron {

/// Continuous piecewise-linear function on [lo, hi], stored by its
/// breakpoints (strictly increasing, first = lo, last = hi) and the values
/// there. Evaluation outside the domain is an error.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values);

  /// Samples `f` at `points` (sorted and deduplicated; must span >= 2 distinct values).
  static PiecewiseLinear from_function(const std::function<double(double)>& f,
                                       std::vector<double> points);
  static PiecewiseLinear constant(double lo, double hi, double c);
  static PiecewiseLinear identity(double lo, double hi);

  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& breakpoints() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  /// Slope on segment [x_i, x_{i+1}].
  double slope(std::size_t i) const { return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]); }

  double operator()(double t) const;

  double min_value() const;
  double max_value() const;

  /// Restriction to [a, b] within the current domain.
  PiecewiseLinear restricted(double a, double b) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// a * f + b * g on the common domain.
PiecewiseLinear linear_combination(double a, const PiecewiseLinear& f, double b,
                                   const PiecewiseLinear& g);

/// Hat function 2t on [0,1/2], 2-2t on [1/2,1], extended by zero to [-1, 2].
PiecewiseLinear make_beta();

/// g_{,n}(t) = g(nt - floor(nt)) on [0,1], value g(1) at t = 1. Requires
/// g(0) = g(1) when n > 1 so that the result is continuous.
PiecewiseLinear periodize(const PiecewiseLinear& g, int n);

/// ReLU(t) - ReLU(t-r/2) - ReLU(t-(1-r)/2) + ReLU(t-1/2) on [-1, 2].
PiecewiseLinear make_alpha(double r);

/// alpha(t+1/4, r) - alpha(t-1/4, r) + alpha(t-3/4, r) on [0, 1].
PiecewiseLinear make_gamma(double r);

/// outer o inner; the range of inner must lie in the domain of outer.
PiecewiseLinear compose(const PiecewiseLinear& outer, const PiecewiseLinear& inner);

struct ReluUnit {
  double c = 0.0;  // coefficient
  double a = 1.0;  // scale
  double b = 0.0;  // shift: contributes c * ReLU(a t - b)
};

struct ReluUnitList {
  std::vector<ReluUnit> units;
  double constant = 0.0;
  double operator()(double t) const;
};

/// Constant f(lo) plus one unit per interior slope change, plus one unit for
/// a nonzero initial slope. Exact on [lo, hi].
ReluUnitList to_relu_units(const PiecewiseLinear& f);

/// True iff f and g agree within tol at every breakpoint of either.
bool pwl_equal(const PiecewiseLinear& f, const PiecewiseLinear& g, double tol);

// Closed-form evaluators (no breakpoint lists), used for quadrature.
double beta_value(double t);
double alpha_value(double t, double r);
double gamma_value(double t, double r);
/// gamma_{,n}(t, r) for t in [0, 1].
double gamma_periodic_value(double t, double r, int n);

}  // namespace barron
