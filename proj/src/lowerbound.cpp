#include "barron/lowerbound.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "barron/errors.hpp"

namespace barron {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace

Witness make_witness(int L, int N, double s, double eps, int d) {
  if (L < 1 || N < 1 || d < 1) throw std::invalid_argument("make_witness: L, N, d must be positive");
  if (!(s > 0.0 && s * L <= 0.5)) throw std::invalid_argument("make_witness: requires 0 < sL <= 1/2");
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("make_witness: eps must lie in (0, 1/2]");
  Witness w;
  w.L = L;
  w.N = N;
  w.s = s;
  w.d = d;
  w.eps = eps;
  w.n = std::ldexp(std::pow(static_cast<double>(N), L), L + 2);
  // (1 + d/(pi n sqrt R))^s <= 1 + eps  <=>  sqrt R >= d / (pi n ((1+eps)^{1/s} - 1))
  const double growth = std::pow(1.0 + eps, 1.0 / s) - 1.0;
  const double r_norm = std::pow(d / (kPi * w.n * growth), 2);
  const double r_env = kPi * d / std::log(1.0 / (1.0 - eps));
  w.R = std::max(r_norm, r_env);
  // both conditions are met with equality; step past rounding
  for (int k = 0; k < 64 && (std::exp(-kPi * d / w.R) < 1.0 - eps || witness_seminorm_bound(w) > 1.0 + eps); ++k) {
    w.R = std::nextafter(w.R, kInfinity) * (1.0 + 1e-15);
  }
  if (!std::isfinite(w.R) || w.R <= 0.0) throw DomainError("make_witness: infeasible parameters");
  return w;
}

double eval_witness(const Witness& w, std::span<const double> x) {
  if (static_cast<int>(x.size()) != w.d) throw std::invalid_argument("eval_witness: wrong dimension");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::pow(w.n, -w.s) * std::cos(2.0 * kPi * w.n * x[0]) * std::exp(-kPi * r2 / w.R);
}

double witness_seminorm_bound(const Witness& w) {
  return std::pow(w.n, -w.s) * std::pow(w.n + w.d / (kPi * std::sqrt(w.R)), w.s);
}

int sign_stable_count(const PiecewiseLinear& line, int n) {
  if (n < 1) throw std::invalid_argument("sign_stable_count: n must be positive");
  const auto& x = line.breakpoints();
  int stable = 0;
  std::size_t k = 0;
  for (int j = 0; j < n; ++j) {
    const double a = static_cast<double>(j) / n;
    const double b = static_cast<double>(j + 1) / n;
    bool pos = false, neg = false;
    const auto note = [&](double v) {
      pos = pos || v > 0.0;
      neg = neg || v < 0.0;
    };
    note(line(a));
    note(line(b));
    while (k < x.size() && x[k] <= a) ++k;
    for (std::size_t i = k; i < x.size() && x[i] < b; ++i) note(line.values()[i]);
    if (!(pos && neg)) ++stable;
  }
  return stable;
}

int stable_count_floor(const Witness& w) {
  return static_cast<int>(w.n) - static_cast<int>(std::ldexp(std::pow(w.N, w.L), w.L + 1));
}

double per_interval_lower(const Witness& w) {
  return (1.0 - w.eps) / (kPi * std::pow(w.n, w.s + 1.0));
}

double certified_rate_bound(const Witness& w) {
  return (1.0 - w.eps) / (4.0 * std::sqrt(2.0) * kPi * std::pow(w.N, w.s * w.L));
}

IntervalLowerBound interval_l1_lower(const Witness& w, const ReluNetwork& net, int grid) {
  if (net.input_dim() != w.d) throw std::invalid_argument("interval_l1_lower: dimension mismatch");
  if (grid < 1) throw std::invalid_argument("interval_l1_lower: grid must be positive");
  const int rest = w.d - 1;
  std::size_t lines = 1;
  for (int c = 0; c < rest; ++c) lines *= static_cast<std::size_t>(grid);
  const int n = static_cast<int>(w.n);
  const double per = per_interval_lower(w);
  IntervalLowerBound out;
  out.lines = lines;
  out.min_stable = n;
  double acc = 0.0;
  std::vector<double> base(static_cast<std::size_t>(w.d), 0.0), dir(static_cast<std::size_t>(w.d), 0.0);
  dir[0] = 1.0;
  for (std::size_t li = 0; li < lines; ++li) {
    std::size_t idx = li;
    for (int c = 0; c < rest; ++c) {
      base[static_cast<std::size_t>(c + 1)] = (static_cast<double>(idx % grid) + 0.5) / grid;
      idx /= static_cast<std::size_t>(grid);
    }
    const int stable = sign_stable_count(restrict_to_line(net, base, dir), n);
    out.min_stable = std::min(out.min_stable, stable);
    acc += stable * per;
  }
  out.lower = acc / static_cast<double>(lines);
  out.min_line_lower = out.min_stable * per;
  return out;
}

SpectralMeasure witness_surrogate(const Witness& w, int per_sigma, double width) {
  if (per_sigma < 1 || !(width > 0.0)) throw std::invalid_argument("witness_surrogate: bad grid");
  const double sigma = 1.0 / std::sqrt(2.0 * kPi * w.R);
  const double h = sigma / per_sigma;
  const int half = static_cast<int>(std::ceil(width * per_sigma));
  const int side = 2 * half + 1;
  // f^(xi) = n^{-s}/2 R^{d/2} [exp(-pi R |xi - n e1|^2) + exp(-pi R |xi + n e1|^2)]
  const double pref = 0.5 * std::pow(w.n, -w.s) * std::pow(w.R, 0.5 * w.d) * std::pow(h, w.d);
  std::size_t cells = 1;
  for (int c = 0; c < w.d; ++c) cells *= static_cast<std::size_t>(side);
  if (cells > 5'000'000) throw std::invalid_argument("witness_surrogate: grid too large");
  std::vector<SpectralAtom> atoms;
  atoms.reserve(2 * cells);
  for (double centre : {w.n, -w.n}) {
    for (std::size_t k = 0; k < cells; ++k) {
      std::size_t idx = k;
      SpectralAtom atom;
      atom.xi.resize(static_cast<std::size_t>(w.d));
      double dist2 = 0.0;
      for (int c = 0; c < w.d; ++c) {
        const double off = (static_cast<double>(idx % static_cast<std::size_t>(side)) - half) * h;
        idx /= static_cast<std::size_t>(side);
        atom.xi[static_cast<std::size_t>(c)] = (c == 0 ? centre : 0.0) + off;
        dist2 += off * off;
      }
      atom.a = pref * std::exp(-kPi * w.R * dist2);
      atoms.push_back(std::move(atom));
    }
  }
  return SpectralMeasure::atomic(w.d, std::move(atoms));
}

}  // namespace barron
