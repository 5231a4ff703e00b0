#include "barron/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "barron/errors.hpp"

namespace barron {
namespace {

// Abscissae closer than this are treated as one breakpoint.
constexpr double kMergeTol = 1e-13;
// Domain slack for evaluation and range checks.
constexpr double kDomainTol = 1e-12;

double relu(double t) { return t > 0.0 ? t : 0.0; }

void check_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0, 1), got " + std::to_string(r));
}

std::vector<double> sorted_unique(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (out.empty() || p - out.back() > kMergeTol) out.push_back(p);
  }
  return out;
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values)
    : x_(std::move(breakpoints)), y_(std::move(values)) {
  if (x_.size() < 2) throw std::invalid_argument("PiecewiseLinear: need at least two breakpoints");
  if (x_.size() != y_.size()) throw std::invalid_argument("PiecewiseLinear: size mismatch");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw std::invalid_argument("PiecewiseLinear: non-finite breakpoint or value");
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      throw std::invalid_argument("PiecewiseLinear: breakpoints must be strictly increasing");
    }
  }
}

PiecewiseLinear PiecewiseLinear::from_function(const std::function<double(double)>& f,
                                               std::vector<double> points) {
  auto x = sorted_unique(std::move(points));
  std::vector<double> y;
  y.reserve(x.size());
  for (double t : x) y.push_back(f(t));
  return PiecewiseLinear(std::move(x), std::move(y));
}

PiecewiseLinear PiecewiseLinear::constant(double lo, double hi, double c) {
  return PiecewiseLinear({lo, hi}, {c, c});
}

PiecewiseLinear PiecewiseLinear::identity(double lo, double hi) {
  return PiecewiseLinear({lo, hi}, {lo, hi});
}

double PiecewiseLinear::operator()(double t) const {
  if (!(t >= lo() - kDomainTol && t <= hi() + kDomainTol)) {
    throw DomainError("PiecewiseLinear: t = " + std::to_string(t) + " outside [" +
                      std::to_string(lo()) + ", " + std::to_string(hi()) + "]");
  }
  t = std::clamp(t, lo(), hi());
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  if (it == x_.end()) return y_.back();
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double w = (t - x_[i]) / (x_[i + 1] - x_[i]);
  return y_[i] + w * (y_[i + 1] - y_[i]);
}

double PiecewiseLinear::min_value() const { return *std::min_element(y_.begin(), y_.end()); }
double PiecewiseLinear::max_value() const { return *std::max_element(y_.begin(), y_.end()); }

PiecewiseLinear PiecewiseLinear::restricted(double a, double b) const {
  if (!(a < b) || a < lo() - kDomainTol || b > hi() + kDomainTol) {
    throw DomainError("PiecewiseLinear::restricted: bad interval");
  }
  std::vector<double> pts{a, b};
  for (double x : x_) {
    if (x > a && x < b) pts.push_back(x);
  }
  return from_function([this](double t) { return (*this)(t); }, std::move(pts));
}

PiecewiseLinear linear_combination(double a, const PiecewiseLinear& f, double b,
                                   const PiecewiseLinear& g) {
  if (std::abs(f.lo() - g.lo()) > kDomainTol || std::abs(f.hi() - g.hi()) > kDomainTol) {
    throw DomainError("linear_combination: domain mismatch");
  }
  std::vector<double> pts = f.breakpoints();
  pts.insert(pts.end(), g.breakpoints().begin(), g.breakpoints().end());
  return PiecewiseLinear::from_function([&](double t) { return a * f(t) + b * g(t); },
                                        std::move(pts));
}

PiecewiseLinear make_beta() {
  return PiecewiseLinear({-1.0, 0.0, 0.5, 1.0, 2.0}, {0.0, 0.0, 1.0, 0.0, 0.0});
}

PiecewiseLinear periodize(const PiecewiseLinear& g, int n) {
  if (n <= 0) throw DomainError("periodize: n must be positive, got " + std::to_string(n));
  if (g.lo() > kDomainTol || g.hi() < 1.0 - kDomainTol) {
    throw DomainError("periodize: g must be defined on [0, 1]");
  }
  const PiecewiseLinear base = (g.lo() == 0.0 && g.hi() == 1.0) ? g : g.restricted(0.0, 1.0);
  const auto& bx = base.breakpoints();
  const auto& by = base.values();
  if (n > 1) {
    const double scale = std::max(1.0, std::max(std::abs(by.front()), std::abs(by.back())));
    if (std::abs(by.front() - by.back()) > kDomainTol * scale) {
      throw DomainError("periodize: g(0) != g(1), the periodization would be discontinuous");
    }
  }
  std::vector<double> x, y;
  x.reserve(n * (bx.size() - 1) + 1);
  y.reserve(x.capacity());
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i + 1 < bx.size(); ++i) {
      x.push_back((j + bx[i]) / n);
      y.push_back(by[i]);
    }
  }
  x.push_back(1.0);
  y.push_back(by.back());
  return PiecewiseLinear(std::move(x), std::move(y));
}

PiecewiseLinear make_alpha(double r) {
  check_r(r);
  const double p = 0.5 * std::min(r, 1.0 - r);
  const double q = 0.5 * std::max(r, 1.0 - r);
  if (q - p <= kMergeTol) {
    return PiecewiseLinear({-1.0, 0.0, 0.25, 0.5, 2.0}, {0.0, 0.0, 0.25, 0.0, 0.0});
  }
  return PiecewiseLinear({-1.0, 0.0, p, q, 0.5, 2.0}, {0.0, 0.0, p, p, 0.0, 0.0});
}

PiecewiseLinear make_gamma(double r) {
  check_r(r);
  const double p = 0.5 * std::min(r, 1.0 - r);
  const double q = 0.5 * std::max(r, 1.0 - r);
  std::vector<double> pts{0.0, 1.0};
  for (double shift : {-0.25, 0.25, 0.75}) {
    for (double k : {0.0, p, q, 0.5}) {
      const double t = k + shift;
      if (t > 0.0 && t < 1.0) pts.push_back(t);
    }
  }
  return PiecewiseLinear::from_function([r](double t) { return gamma_value(t, r); }, std::move(pts));
}

PiecewiseLinear compose(const PiecewiseLinear& outer, const PiecewiseLinear& inner) {
  if (inner.min_value() < outer.lo() - kDomainTol || inner.max_value() > outer.hi() + kDomainTol) {
    throw DomainError("compose: range of inner function exceeds domain of outer function");
  }
  const auto& ix = inner.breakpoints();
  const auto& iy = inner.values();
  const auto& ox = outer.breakpoints();
  const auto& oy = outer.values();

  // (x, value) pairs; preimages of outer breakpoints take the exact outer value
  std::vector<std::pair<double, double>> pts;
  pts.reserve(ix.size() * 2);
  for (std::size_t i = 0; i < ix.size(); ++i) {
    pts.emplace_back(ix[i], outer(std::clamp(iy[i], outer.lo(), outer.hi())));
    if (i + 1 == ix.size()) break;
    const double y0 = iy[i], y1 = iy[i + 1];
    if (y0 == y1) continue;
    const double lo = std::min(y0, y1), hi = std::max(y0, y1);
    auto first = std::upper_bound(ox.begin(), ox.end(), lo);
    auto last = std::lower_bound(ox.begin(), ox.end(), hi);
    for (auto it = first; it < last; ++it) {
      const double xb = ix[i] + (*it - y0) / (y1 - y0) * (ix[i + 1] - ix[i]);
      pts.emplace_back(xb, oy[static_cast<std::size_t>(it - ox.begin())]);
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> x, y;
  x.reserve(pts.size());
  y.reserve(pts.size());
  for (const auto& [px, py] : pts) {
    if (!x.empty() && px - x.back() <= kMergeTol) continue;
    x.push_back(px);
    y.push_back(py);
  }
  // keep the exact domain end
  if (x.back() != ix.back()) {
    x.back() = ix.back();
    y.back() = outer(std::clamp(iy.back(), outer.lo(), outer.hi()));
  }
  return PiecewiseLinear(std::move(x), std::move(y));
}

double ReluUnitList::operator()(double t) const {
  double sum = constant;
  for (const auto& u : units) sum += u.c * relu(u.a * t - u.b);
  return sum;
}

ReluUnitList to_relu_units(const PiecewiseLinear& f) {
  ReluUnitList out;
  out.constant = f.values().front();
  const std::size_t segs = f.size() - 1;
  double max_slope = 1.0;
  for (std::size_t i = 0; i < segs; ++i) max_slope = std::max(max_slope, std::abs(f.slope(i)));
  const double tol = 1e-12 * max_slope;
  // Accumulate the slope actually realised so that skipped tiny changes
  // do not drift.
  double realised = 0.0;
  for (std::size_t i = 0; i < segs; ++i) {
    const double change = f.slope(i) - realised;
    if (std::abs(change) <= tol) continue;
    out.units.push_back(ReluUnit{change, 1.0, f.breakpoints()[i]});
    realised += change;
  }
  return out;
}

bool pwl_equal(const PiecewiseLinear& f, const PiecewiseLinear& g, double tol) {
  if (std::abs(f.lo() - g.lo()) > kDomainTol || std::abs(f.hi() - g.hi()) > kDomainTol) {
    throw DomainError("pwl_equal: domain mismatch");
  }
  for (double t : f.breakpoints()) {
    if (std::abs(f(t) - g(t)) > tol) return false;
  }
  for (double t : g.breakpoints()) {
    if (std::abs(f(t) - g(t)) > tol) return false;
  }
  return true;
}

double beta_value(double t) {
  return relu(2.0 * t) - 2.0 * relu(2.0 * t - 1.0) + relu(2.0 * t - 2.0);
}

double alpha_value(double t, double r) {
  return relu(t) - relu(t - 0.5 * r) - relu(t - 0.5 * (1.0 - r)) + relu(t - 0.5);
}

double gamma_value(double t, double r) {
  return alpha_value(t + 0.25, r) - alpha_value(t - 0.25, r) + alpha_value(t - 0.75, r);
}

double gamma_periodic_value(double t, double r, int n) {
  const double u = n * t;
  double frac = u - std::floor(u);
  if (t >= 1.0) frac = 1.0;
  return gamma_value(frac, r);
}

}  // namespace barron
