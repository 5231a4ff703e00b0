#include "barron/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "barron/errors.hpp"
#include "barron/special.hpp"

namespace barron {
namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;
constexpr double kPi = std::numbers::pi;

void check_target(const BesselTarget& t) {
  if (!(t.alpha > 0.0 && t.alpha <= 1.0)) throw DomainError("bessel: alpha must lie in (0, 1]");
  if (t.d < 1) throw DomainError("bessel: dimension must be positive");
  if (t.tail_panels < 4) throw DomainError("bessel: need at least 4 tail panels");
}

// Integral of amp(xi) over [a, b], split so that each piece is no wider than
// half its distance-to-origin-plus-one (the amplitude varies on that scale).
template <class F>
double graded_integral(const F& f, double a, double b) {
  double sum = 0.0;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, lo + 0.5 * (1.0 + lo));
    sum += Gauss::integrate(f, lo, hi);
    lo = hi;
  }
  return sum;
}

// int_0^inf (1 + xi^2)^{-nu} cos(rho xi) d xi
double radial_cosine_integral(double nu, double rho, int panels) {
  if (rho == 0.0) {
    return 0.5 * std::sqrt(kPi) * std::exp(log_gamma(nu - 0.5) - log_gamma(nu));
  }
  const auto f = [nu, rho](double xi) { return std::pow(1.0 + xi * xi, -nu) * std::cos(rho * xi); };
  const double half = kPi / rho;
  // first panel ends at the first zero of the cosine
  double partial = graded_integral(f, 0.0, 0.5 * half);
  std::vector<double> sums;
  sums.reserve(panels);
  for (int k = 1; k <= panels; ++k) {
    partial += graded_integral(f, (k - 0.5) * half, (k + 0.5) * half);
    sums.push_back(partial);
  }
  // Alternating tail: repeated averaging of consecutive partial sums.
  while (sums.size() > 1) {
    for (std::size_t i = 0; i + 1 < sums.size(); ++i) sums[i] = 0.5 * (sums[i] + sums[i + 1]);
    sums.pop_back();
  }
  return sums.front();
}

// Average over the unit sphere of w(rho, omega), times the sphere's area.
double angular_weight(int d, double rho, double s, BarronWeight weight) {
  const auto w = [&](double l1) {
    return weight == BarronWeight::full ? std::pow(1.0 + rho * l1, s) : std::pow(rho * l1, s);
  };
  switch (d) {
    case 1:
      return 2.0 * w(1.0);
    case 2:
      return 4.0 * Gauss::integrate([&](double phi) { return w(std::cos(phi) + std::sin(phi)); }, 0.0,
                                    0.5 * kPi);
    case 3:
      return 8.0 * Gauss::integrate(
                       [&](double theta) {
                         const double st = std::sin(theta), ct = std::cos(theta);
                         return st * Gauss::integrate(
                                         [&](double phi) {
                                           return w(st * (std::cos(phi) + std::sin(phi)) + ct);
                                         },
                                         0.0, 0.5 * kPi);
                       },
                       0.0, 0.5 * kPi);
    default:
      throw UnsupportedTarget("barron_integral: radial quadrature supports d <= 3");
  }
}

}  // namespace

double radial_prefactor(const BesselTarget& t) {
  check_target(t);
  return std::exp(log_gamma(0.5 * (t.alpha + 1.0)) - log_gamma(0.5 * (t.alpha + t.d)) -
                  t.d * std::numbers::ln2 - 0.5 * (t.d + 1.0) * std::log(kPi));
}

double eval_radial(const BesselTarget& t, double rho) {
  check_target(t);
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("eval_radial: radius must be >= 0");
  const double nu = 0.5 * (t.alpha + 1.0);
  return radial_prefactor(t) * 2.0 * radial_cosine_integral(nu, rho, t.tail_panels);
}

double eval_radial_alpha1(int d, double rho) {
  if (d < 1) throw DomainError("eval_radial_alpha1: dimension must be positive");
  return std::exp(-d * std::numbers::ln2 + 0.5 * (1.0 - d) * std::log(kPi) -
                  log_gamma(0.5 * (d + 1.0)) - rho);
}

double holder_exponent(const BesselTarget& t, std::span<const double> radii) {
  if (radii.size() < 4) throw std::invalid_argument("holder_exponent: need at least 4 radii");
  const double f0 = eval_radial(t, 0.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double rho : radii) {
    if (!(rho > 0.0 && rho <= 0.5)) throw std::invalid_argument("holder_exponent: radii must lie in (0, 0.5]");
    const double diff = f0 - eval_radial(t, rho);
    if (!(diff > 0.0)) {
      throw Error("holder_exponent: f(0) - f(rho) <= 0 at rho = " + std::to_string(rho) +
                  "; quadrature accuracy insufficient");
    }
    const double x = std::log(rho), y = std::log(diff);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(radii.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double barron_integral(const BesselTarget& t, double s, double cutoff, BarronWeight weight) {
  check_target(t);
  if (!(cutoff > 1.0)) throw DomainError("barron_integral: cutoff must exceed 1");
  if (!(s >= 0.0)) throw DomainError("barron_integral: s must be nonnegative");
  const int d = t.d;
  const double expo = -0.5 * (t.alpha + d);
  const auto radial = [&](double rho) {
    return std::pow(rho, d - 1) * std::pow(1.0 + 4.0 * kPi * kPi * rho * rho, expo) *
           angular_weight(d, rho, s, weight);
  };
  // [0, 1/8] then geometric panels with ratio 10^{1/8}
  double sum = 0.0;
  double lo = 0.0, hi = 0.125;
  const double ratio = std::pow(10.0, 0.125);
  while (lo < cutoff) {
    hi = std::min(hi, cutoff);
    sum += Gauss::integrate(radial, lo, hi);
    lo = hi;
    hi = lo * ratio;
  }
  return sum;
}

BarronDiagnostic barron_diagnostic(const BesselTarget& t, double s, BarronWeight weight,
                                   double min_decay) {
  BarronDiagnostic out;
  for (int k = 2; k <= 6; ++k) {
    const double c = std::pow(10.0, k);
    out.cutoffs.push_back(c);
    out.values.push_back(barron_integral(t, s, c, weight));
  }
  std::vector<double> inc;
  for (std::size_t i = 1; i < out.values.size(); ++i) inc.push_back(out.values[i] - out.values[i - 1]);
  for (std::size_t i = 1; i < inc.size(); ++i) {
    out.ratios.push_back(inc[i - 1] > 0.0 ? inc[i] / inc[i - 1] : 0.0);
  }
  const double last = out.ratios.back();
  out.decay = last > 0.0 ? -std::log10(last) : std::numeric_limits<double>::infinity();
  out.convergent = out.decay > min_decay;
  out.extrapolated = out.values.back();
  if (out.convergent && last > 0.0) out.extrapolated += inc.back() * last / (1.0 - last);
  return out;
}

double bessel_barron_norm(const BesselTarget& t, double s, BarronWeight weight) {
  const auto diag = barron_diagnostic(t, s, weight);
  if (!diag.convergent) {
    throw DivergentNorm("Barron integral grows with the cutoff (decay exponent " +
                        std::to_string(diag.decay) + " per decade)");
  }
  return diag.extrapolated;
}

}  // namespace barron
