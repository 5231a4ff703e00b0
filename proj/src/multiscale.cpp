#include "barron/multiscale.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "barron/errors.hpp"

namespace barron {
namespace {

constexpr int kMaxLevel = 40;

std::int64_t floor_div2(std::int64_t j) { return j >= 0 ? j / 2 : -((-j + 1) / 2); }

}  // namespace

double multiscale_coeff(const ScalarFn& g, int l, std::int64_t j) {
  if (l < 0) throw std::invalid_argument("multiscale_coeff: level must be nonnegative");
  if (l == 0) return g(static_cast<double>(j));
  if (j % 2 == 0) return 0.0;
  return g(std::ldexp(static_cast<double>(j), -l)) -
         g(std::ldexp(static_cast<double>(floor_div2(j)), 1 - l));
}

MultiscaleExpansion::MultiscaleExpansion(ScalarFn g, int m, IndexRange window)
    : m_(m), window_(window) {
  if (m < 0 || m > 30) throw std::invalid_argument("MultiscaleExpansion: level must lie in [0, 30]");
  if (window.count() == 0) throw std::invalid_argument("MultiscaleExpansion: empty window");
  coeffs_.resize(static_cast<std::size_t>(m) + 1);
  for (int l = 0; l <= m; ++l) {
    const auto idx = indices(l);
    auto& c = coeffs_[static_cast<std::size_t>(l)];
    c.reserve(static_cast<std::size_t>(idx.count()));
    for (std::int64_t j = idx.lo; j <= idx.hi; ++j) c.push_back(multiscale_coeff(g, l, j));
  }
}

IndexRange MultiscaleExpansion::indices(int l) const {
  const std::int64_t scale = std::int64_t{1} << l;
  return IndexRange{window_.lo * scale, (window_.hi + 1) * scale - 1};
}

double MultiscaleExpansion::coeff(int l, std::int64_t j) const {
  if (l < 0 || l > m_) throw std::out_of_range("MultiscaleExpansion::coeff: level out of range");
  const auto idx = indices(l);
  if (!idx.contains(j)) throw std::out_of_range("MultiscaleExpansion::coeff: index outside window");
  return coeffs_[static_cast<std::size_t>(l)][static_cast<std::size_t>(j - idx.lo)];
}

std::size_t MultiscaleExpansion::coefficient_count() const {
  std::size_t n = 0;
  for (const auto& c : coeffs_) n += c.size();
  return n;
}

double MultiscaleExpansion::operator()(double t) const {
  if (!(t >= static_cast<double>(window_.lo) && t < static_cast<double>(window_.hi + 1))) {
    throw DomainError("MultiscaleExpansion: t = " + std::to_string(t) + " outside the window");
  }
  double sum = 0.0;
  for (int l = 0; l <= m_; ++l) {
    const auto j = static_cast<std::int64_t>(std::floor(std::ldexp(t, l)));
    sum += coeffs_[static_cast<std::size_t>(l)][static_cast<std::size_t>(j - indices(l).lo)];
  }
  return sum;
}

MultiscaleExpansion truncated(const ScalarFn& g, int m, IndexRange window) {
  return MultiscaleExpansion(g, m, window);
}

IndexRange active_indices(std::span<const double> xi, int l, double theta) {
  if (l < 0 || l > kMaxLevel) throw std::invalid_argument("active_indices: level out of range");
  double neg = 0.0, pos = 0.0;
  for (double v : xi) (v < 0.0 ? neg : pos) += std::abs(v);
  const double u_min = theta - neg;
  const double u_max = theta + pos;
  return IndexRange{static_cast<std::int64_t>(std::floor(std::ldexp(u_min, l))),
                    static_cast<std::int64_t>(std::floor(std::ldexp(u_max, l)))};
}

}  // namespace barron
