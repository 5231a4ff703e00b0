#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "barron/netcore.hpp"
#include "barron/rng.hpp"
#include "barron/spectral.hpp"

namespace barron {

/// Evaluates a function at the columns of a d x n matrix.
using BatchFn = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

BatchFn target_fn(const SpectralMeasure& m);
BatchFn network_fn(const ReluNetwork& net);
BatchFn network_fn(const ShallowNet& net);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ErrorEstimate {
  double p = 2.0;  // kInfinity for the sup norm
  double value = 0.0;
  double std_error = 0.0;
  std::string method;  // "mc", "grid" or "grid+lipschitz"
  std::size_t count = 0;
};

/// Points fill [0,1]^d uniformly; evaluation is chunked over parallel_for and
/// reduced in a fixed order, so results do not depend on the thread count.
ErrorEstimate lp_error_mc(const BatchFn& f, const BatchFn& g, int d, double p, std::size_t n,
                          Rng& rng);

/// Tensor midpoint rule with `resolution` cells per axis; p may be infinite.
ErrorEstimate lp_error_grid(const BatchFn& f, const BatchFn& g, int d, double p, int resolution);

/// Grid maximum plus (Lip_target + Lip_net) h / 2, h = 1/resolution: every
/// point of the cube is within h/2 (l-infinity) of a cell midpoint.
ErrorEstimate linf_error_certified(const SpectralMeasure& target, const ReluNetwork& net,
                                   int resolution);

struct RateFit {
  std::vector<double> N;
  std::vector<double> errors;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
};

/// Least squares on (ln N, ln error); >= 3 points, N strictly increasing.
RateFit fit_rate(const std::vector<double>& N, const std::vector<double>& errors);

/// Pairwise (cascade) sum with a fixed tree shape.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace barron
