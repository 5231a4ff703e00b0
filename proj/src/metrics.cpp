#include "barron/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "barron/errors.hpp"
#include "barron/parallel.hpp"

namespace barron {
namespace {

constexpr std::size_t kChunk = 2048;

// Fills `out[i]` with |f - g|^p (or |f - g| when p is infinite) at the points
// produced by `point(i, column)`, chunked in parallel.
template <class PointFn>
std::vector<double> pointwise_powers(const BatchFn& f, const BatchFn& g, int d, double p,
                                     std::size_t n, const PointFn& point) {
  std::vector<double> out(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t len = std::min(kChunk, n - begin);
    Eigen::MatrixXd X(d, static_cast<Eigen::Index>(len));
    for (std::size_t i = 0; i < len; ++i) point(begin + i, X.col(static_cast<Eigen::Index>(i)));
    const Eigen::VectorXd diff = (f(X) - g(X)).cwiseAbs();
    for (std::size_t i = 0; i < len; ++i) {
      const double v = diff(static_cast<Eigen::Index>(i));
      out[begin + i] = std::isinf(p) ? v : std::pow(v, p);
    }
  });
  return out;
}

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("error norm: p must be >= 1");
}

}  // namespace

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

BatchFn target_fn(const SpectralMeasure& m) {
  if (m.is_atomic()) {
    // vectorised cosine sum
    const int d = m.dim();
    const auto k = static_cast<Eigen::Index>(m.atoms().size());
    Eigen::MatrixXd Xi(k, d);
    Eigen::VectorXd a(k), phi(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& atom = m.atoms()[static_cast<std::size_t>(i)];
      for (int c = 0; c < d; ++c) Xi(i, c) = atom.xi[static_cast<std::size_t>(c)];
      a(i) = atom.a;
      phi(i) = atom.phi;
    }
    return [Xi, a, phi](const Eigen::MatrixXd& X) -> Eigen::VectorXd {
      if (Xi.rows() == 0) return Eigen::VectorXd::Zero(X.cols());
      Eigen::MatrixXd Z = 2.0 * std::numbers::pi * (Xi * X);
      Z.colwise() += phi;
      return Z.array().cos().matrix().transpose() * a;
    };
  }
  return [m](const Eigen::MatrixXd& X) -> Eigen::VectorXd {
    Eigen::VectorXd out(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const Eigen::VectorXd x = X.col(j);
      out(j) = eval_target(m, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    }
    return out;
  };
}

BatchFn network_fn(const ReluNetwork& net) {
  return [net](const Eigen::MatrixXd& X) { return net.forward_batch(X); };
}

BatchFn network_fn(const ShallowNet& net) {
  return [net](const Eigen::MatrixXd& X) { return forward_shallow_batch(net, X); };
}

ErrorEstimate lp_error_mc(const BatchFn& f, const BatchFn& g, int d, double p, std::size_t n,
                          Rng& rng) {
  check_p(p);
  if (std::isinf(p)) throw std::invalid_argument("lp_error_mc: p must be finite");
  if (n < 2) throw std::invalid_argument("lp_error_mc: need at least two points");
  if (d < 1) throw std::invalid_argument("lp_error_mc: dimension must be positive");
  // draw all points up front so the stream is consumed in a fixed order
  Eigen::MatrixXd pts(d, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) pts(c, static_cast<Eigen::Index>(i)) = rng.uniform();
  }
  const auto vals = pointwise_powers(f, g, d, p, n, [&](std::size_t i, auto col) {
    col = pts.col(static_cast<Eigen::Index>(i));
  });
  const double mean = pairwise_sum(vals.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (vals[i] - mean) * (vals[i] - mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  ErrorEstimate e;
  e.p = p;
  e.value = std::pow(mean, 1.0 / p);
  // delta method: d(mu^{1/p}) = (1/p) mu^{1/p - 1} d mu
  e.std_error = mean > 0.0 ? std::pow(mean, 1.0 / p - 1.0) / p * std::sqrt(var / n) : 0.0;
  e.method = "mc";
  e.count = n;
  return e;
}

ErrorEstimate lp_error_grid(const BatchFn& f, const BatchFn& g, int d, double p, int resolution) {
  check_p(p);
  if (d > 3) throw UnsupportedTarget("lp_error_grid: tensor grids support d <= 3; use Monte Carlo");
  if (d < 1) throw std::invalid_argument("lp_error_grid: dimension must be positive");
  if (resolution < 16) throw std::invalid_argument("lp_error_grid: resolution must be >= 16");
  std::size_t n = 1;
  for (int c = 0; c < d; ++c) n *= static_cast<std::size_t>(resolution);
  const double h = 1.0 / resolution;
  const auto vals = pointwise_powers(f, g, d, p, n, [&](std::size_t i, auto col) {
    for (int c = 0; c < d; ++c) {
      col(c) = (static_cast<double>(i % static_cast<std::size_t>(resolution)) + 0.5) * h;
      i /= static_cast<std::size_t>(resolution);
    }
  });
  ErrorEstimate e;
  e.p = p;
  e.method = "grid";
  e.count = n;
  if (std::isinf(p)) {
    e.value = *std::max_element(vals.begin(), vals.end());
  } else {
    e.value = std::pow(pairwise_sum(vals.data(), n) / static_cast<double>(n), 1.0 / p);
  }
  return e;
}

ErrorEstimate linf_error_certified(const SpectralMeasure& target, const ReluNetwork& net,
                                   int resolution) {
  if (!target.is_atomic()) throw UnsupportedTarget("linf_error_certified: requires an atomic target");
  if (net.input_dim() != target.dim()) throw std::invalid_argument("linf_error_certified: dimension mismatch");
  ErrorEstimate e = lp_error_grid(target_fn(target), network_fn(net), target.dim(), kInfinity,
                                  resolution);
  const double lip = target_lipschitz(target) + lipschitz_bound(normalize_rows(net));
  e.value += lip * 0.5 / resolution;
  e.method = "grid+lipschitz";
  return e;
}

RateFit fit_rate(const std::vector<double>& N, const std::vector<double>& errors) {
  if (N.size() != errors.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (N.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(errors[i] > 0.0)) throw DomainError("fit_rate: errors must be positive");
    if (!(N[i] > 0.0) || (i > 0 && !(N[i] > N[i - 1]))) {
      throw std::invalid_argument("fit_rate: N must be positive and strictly increasing");
    }
  }
  RateFit fit;
  fit.N = N;
  fit.errors = errors;
  const double n = static_cast<double>(N.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < N.size(); ++i) {
    const double x = std::log(N[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < N.size(); ++i) {
    const double r = std::log(errors[i]) - (fit.intercept + fit.slope * std::log(N[i]));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

}  // namespace barron
