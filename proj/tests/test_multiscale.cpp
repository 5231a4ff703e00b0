#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "barron/errors.hpp"
#include "barron/multiscale.hpp"
#include "barron/rng.hpp"

using namespace barron;
using std::numbers::pi;

TEST_SUITE("multiscale") {
  const ScalarFn cosine = [](double t) { return std::cos(2 * pi * t); };

  TEST_CASE("coefficients") {
    for (std::int64_t j = -5; j <= 5; ++j) CHECK(multiscale_coeff(cosine, 0, j) == doctest::Approx(1.0));
    CHECK(multiscale_coeff(cosine, 1, 1) == doctest::Approx(-2.0));
    const ScalarFn any = [](double t) { return std::exp(t) + t * t; };
    CHECK(multiscale_coeff(any, 2, 2) == 0.0);
    CHECK(multiscale_coeff(any, 5, -4) == 0.0);
  }

  TEST_CASE("coefficient bound 2^{1-l} pi for cosines") {
    for (double phi : {0.0, 0.4, 1.3, 2.9, 5.0}) {
      const ScalarFn g = [phi](double t) { return std::cos(2 * pi * t + phi); };
      for (int l = 1; l <= 10; ++l) {
        for (std::int64_t j = 0; j < (std::int64_t{1} << l); ++j) {
          CHECK(std::abs(multiscale_coeff(g, l, j)) <= std::ldexp(1.0, 1 - l) * pi + 1e-12);
        }
      }
    }
  }

  TEST_CASE("collapse to the finest level") {
    const ScalarFn g = [](double t) { return std::cos(2 * pi * t + 0.7); };
    const auto e = truncated(g, 6, {0, 0});
    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
      const double t = r.uniform();
      const double direct = g(std::floor(64.0 * t) / 64.0);
      CHECK(std::abs(e(t) - direct) <= 1e-12);
    }
  }

  TEST_CASE("constant function at level zero") {
    const auto e = truncated([](double) { return 3.25; }, 0, {-2, 3});
    for (double t : {-2.0, -0.3, 1.0, 3.999}) CHECK(e(t) == 3.25);
    CHECK_THROWS_AS(e(4.0), DomainError);
    CHECK_THROWS_AS(e(-2.1), DomainError);
  }

  TEST_CASE("sup error against the derivative bound") {
    for (int m : {2, 4, 6}) {
      const auto e = truncated(cosine, m, {0, 0});
      double worst = 0.0;
      for (int i = 0; i < 10000; ++i) {
        const double t = i / 10000.0;
        worst = std::max(worst, std::abs(cosine(t) - e(t)));
      }
      CHECK(worst <= std::ldexp(1.0, -m) * 2 * pi);
    }
  }

  TEST_CASE("expansion bookkeeping") {
    const MultiscaleExpansion e(cosine, 3, {0, 1});
    CHECK(e.indices(0).lo == 0);
    CHECK(e.indices(0).hi == 1);
    CHECK(e.indices(3).lo == 0);
    CHECK(e.indices(3).hi == 15);
    CHECK(e.coefficient_count() == 2 + 4 + 8 + 16);
    CHECK(e.coeff(1, 1) == doctest::Approx(-2.0));
    CHECK_THROWS(e.coeff(4, 0));
    CHECK_THROWS(e.coeff(3, 16));
    CHECK_THROWS(MultiscaleExpansion(cosine, 2, {1, 0}));
    CHECK_THROWS(MultiscaleExpansion(cosine, 31, {0, 0}));
  }

  TEST_CASE("active indices") {
    for (int l : {0, 3, 7}) {
      const auto J = active_indices(std::vector<double>{0.0, 0.0}, l, 0.0);
      CHECK(J.lo == 0);
      CHECK(J.hi == 0);
    }
    const auto J = active_indices(std::vector<double>{1.0, 2.0}, 1, 0.0);
    CHECK(J.lo == 0);
    CHECK(J.hi == 6);
    CHECK(J.count() == 7);
    CHECK(J.count() <= 8);
  }

  TEST_CASE("active index count stays within 2^l |xi|_1 + 1") {
    Rng r(99);
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<double> xi{8.0 * (r.uniform() - 0.5), 8.0 * (r.uniform() - 0.5)};
      const int l = static_cast<int>(r.uniform() * 8);
      const double theta = 3.0 * r.uniform();
      const auto J = active_indices(xi, l, theta);
      const double span = std::ldexp(std::abs(xi[0]) + std::abs(xi[1]), l);
      CHECK(J.count() <= static_cast<std::int64_t>(std::ceil(span)) + 1);
      // every sampled point lands in the range
      for (int k = 0; k < 50; ++k) {
        const double u = xi[0] * r.uniform() + xi[1] * r.uniform() + theta;
        CHECK(J.contains(static_cast<std::int64_t>(std::floor(std::ldexp(u, l)))));
      }
    }
  }
}
