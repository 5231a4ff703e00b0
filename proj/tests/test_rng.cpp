#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "barron/parallel.hpp"
#include "barron/rng.hpp"

using namespace barron;

TEST_SUITE("rng") {
  TEST_CASE("same seed gives the same stream") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  }

  TEST_CASE("split does not depend on parent consumption") {
    Rng a(9);
    const Rng fresh(9);
    for (int i = 0; i < 17; ++i) a.uniform();
    Rng c1 = a.split(4), c2 = fresh.split(4);
    for (int i = 0; i < 50; ++i) CHECK(c1.next_u64() == c2.next_u64());
    // different keys, different streams
    Rng d1 = fresh.split(4), d2 = fresh.split(5);
    CHECK(d1.next_u64() != d2.next_u64());
  }

  TEST_CASE("uniform ranges") {
    Rng r(1);
    double mean = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double u = r.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      const double v = r.uniform_open();
      REQUIRE(v > 0.0);
      REQUIRE(v < 1.0);
      mean += u;
    }
    mean /= n;
    // sd of the mean is sqrt(1/12 / n)
    CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  }

  TEST_CASE("geometric law, chi-square") {
    const double q = std::pow(2.0, -1.5);
    Rng r(2024);
    const int n = 100000, bins = 10;
    std::vector<double> count(bins + 1, 0.0);
    for (int i = 0; i < n; ++i) {
      const auto k = r.geometric(q);
      count[std::min<std::size_t>(k, bins)] += 1.0;
    }
    double chi2 = 0.0;
    for (int k = 0; k <= bins; ++k) {
      const double pk = k < bins ? (1.0 - q) * std::pow(q, k) : std::pow(q, bins);
      const double e = n * pk;
      chi2 += (count[k] - e) * (count[k] - e) / e;
    }
    // 10 degrees of freedom: the 0.999 quantile is 29.59
    CHECK(chi2 < 29.59);
    CHECK(count[0] / n == doctest::Approx(1.0 - q).epsilon(0.01));
  }

  TEST_CASE("categorical follows weights") {
    Rng r(5);
    const std::vector<double> cum{1.0, 1.0, 4.0};  // weights 1, 0, 3
    std::vector<int> hits(3, 0);
    for (int i = 0; i < 40000; ++i) ++hits[r.categorical(cum)];
    CHECK(hits[1] == 0);
    CHECK(hits[0] / 40000.0 == doctest::Approx(0.25).epsilon(0.05));
    CHECK_THROWS_AS(r.categorical(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(r.geometric(1.0), std::invalid_argument);
  }

  TEST_CASE("normal moments") {
    Rng r(77);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = r.normal();
      s1 += z;
      s2 += z * z;
    }
    CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("parallel_for visits every index once") {
    for (std::size_t t : {1u, 3u}) {
      set_thread_count(t);
      std::vector<int> seen(1000, 0);
      parallel_for(seen.size(), [&](std::size_t i) { seen[i] += 1; });
      for (int v : seen) REQUIRE(v == 1);
    }
    set_thread_count(0);
  }

  TEST_CASE("parallel_for propagates exceptions") {
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                      if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }
}
