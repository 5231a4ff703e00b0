#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "barron/errors.hpp"
#include "barron/rng.hpp"
#include "barron/spectral.hpp"

using namespace barron;
using std::numbers::pi;

namespace {

SpectralMeasure one(std::vector<double> xi, double a = 1.0, double phi = 0.0) {
  const int d = static_cast<int>(xi.size());
  return SpectralMeasure::atomic(d, {SpectralAtom{std::move(xi), a, phi}});
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("eval_target small cases") {
    CHECK(eval_target(one({0.0}), std::vector<double>{0.37}) == doctest::Approx(1.0));
    CHECK(std::abs(eval_target(one({1.0}), std::vector<double>{0.25})) < 1e-15);
    const auto two = SpectralMeasure::atomic(1, {{{1.0}, 1.0, 0.0}, {{2.0}, 2.0, 0.0}});
    CHECK(eval_target(two, std::vector<double>{0.0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(eval_target(two, std::vector<double>{0.0, 0.0}), std::invalid_argument);
  }

  TEST_CASE("construction validates atoms") {
    CHECK_THROWS(SpectralMeasure::atomic(0, {{{}, 1.0, 0.0}}));
    CHECK_THROWS(SpectralMeasure::atomic(2, {{{1.0}, 1.0, 0.0}}));
    CHECK_THROWS(SpectralMeasure::atomic(1, {{{1.0}, -1.0, 0.0}}));
    CHECK_THROWS(SpectralMeasure::atomic(1, {}));
    CHECK_THROWS(SpectralMeasure::bessel(1, 1.5));
    // phase normalized into [0, 2 pi)
    const auto m = one({1.0}, 1.0, -pi / 2);
    CHECK(m.atoms()[0].phi == doctest::Approx(1.5 * pi));
  }

  TEST_CASE("barron_norm") {
    auto n = barron_norm(one({1.0}), 0.5);
    CHECK(n.seminorm == doctest::Approx(1.0));
    CHECK(n.full_norm == doctest::Approx(std::sqrt(2.0)));
    n = barron_norm(one({0.0, 0.0}), 0.3);
    CHECK(n.seminorm == 0.0);
    CHECK(n.full_norm == doctest::Approx(1.0));
    const auto m = SpectralMeasure::atomic(1, {{{0.0}, 2.0, 0.0}, {{-1.0}, 3.0, 0.0}});
    n = barron_norm(m, 1.0);
    CHECK(n.seminorm == doctest::Approx(3.0));
    CHECK(n.full_norm == doctest::Approx(8.0));
  }

  TEST_CASE("barron_norm of the bessel family") {
    const auto b = SpectralMeasure::bessel(1, 0.5);
    CHECK_THROWS_AS(barron_norm(b, 0.6), DivergentNorm);
    CHECK_THROWS_AS(barron_norm(b, 0.5), DivergentNorm);
    CHECK(barron_norm(b, 0.3).full_norm > 0.0);
  }

  TEST_CASE("frequency_split") {
    const auto m = SpectralMeasure::atomic(1, {{{0.5}, 1.0, 0.0}, {{3.0}, 2.0, 0.0}});
    auto [low, high] = frequency_split(m, 1.0);
    REQUIRE(low.atoms().size() == 1);
    REQUIRE(high.atoms().size() == 1);
    CHECK(low.atoms()[0].xi[0] == 0.5);
    CHECK(high.atoms()[0].xi[0] == 3.0);
    auto [all, none] = frequency_split(m, 10.0);
    CHECK(all.atoms().size() == 2);
    CHECK(none.empty());
    CHECK(eval_target(none, std::vector<double>{0.3}) == 0.0);
  }

  TEST_CASE("uniform split threshold") {
    CHECK(uniform_split_threshold(4, 2, 1) == doctest::Approx(4.0 / (1.0 + 2.0 * std::log(4.0))));
  }

  TEST_CASE("normalizer") {
    CHECK(normalizer_Q(one({0.0}), 0.5) == doctest::Approx(1.0));
    CHECK(normalizer_Q(one({3.0}), 0.5) == doctest::Approx(0.5));
    CHECK(normalizer_Q(one({1.0, -2.0}), 0.5) == doctest::Approx(0.5));
  }

  TEST_CASE("Q times full norm dominates the squared amplitude sum") {
    Rng r(31);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<SpectralAtom> atoms;
      const int k = 1 + static_cast<int>(r.uniform() * 6);
      for (int i = 0; i < k; ++i) {
        atoms.push_back({{10.0 * (r.uniform() - 0.5), 10.0 * (r.uniform() - 0.5)}, r.uniform(), 0.0});
      }
      const auto m = SpectralMeasure::atomic(2, atoms);
      const double s = 0.05 + 0.9 * r.uniform();
      const double A = amplitude_sum(m);
      CHECK(normalizer_Q(m, s) * barron_norm(m, s).full_norm >= A * A * (1.0 - 1e-12));
    }
  }

  TEST_CASE("phase offset keeps the argument in [0, 1 + |xi|_1)") {
    Rng r(8);
    for (int trial = 0; trial < 200; ++trial) {
      SpectralAtom at{{6.0 * (r.uniform() - 0.5), 6.0 * (r.uniform() - 0.5)}, 1.0, 2.0 * pi * r.uniform()};
      const double th = phase_offset(at);
      const double frac = th - std::floor(th);
      CHECK(std::abs(frac - at.phi / (2.0 * pi)) < 1e-12);
      // extreme corners of the cube
      double lo = th, hi = th;
      for (double v : at.xi) (v < 0 ? lo : hi) += v;
      CHECK(lo >= -1e-12);
      CHECK(hi < 1.0 + l1_norm(at.xi));
    }
  }

  TEST_CASE("sample_snn") {
    Rng r(3);
    const auto m = one({2.0, 1.0});
    for (int i = 0; i < 100; ++i) {
      const auto smp = sample_snn(m, 0.5, r);
      CHECK(smp.atom == 0);
      CHECK(smp.xi == std::vector<double>{2.0, 1.0});
    }
    int zero = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) zero += sample_snn(m, 0.5, r).level == 0;
    const double p0 = 1.0 - std::pow(2.0, -1.5);
    CHECK(p0 == doctest::Approx(0.6464).epsilon(1e-4));
    CHECK(std::abs(zero / double(n) - p0) < 3.0 * std::sqrt(p0 * (1 - p0) / n));
    CHECK_THROWS(sample_snn(SpectralMeasure::empty(2), 0.5, r));
    CHECK_THROWS(sample_snn(m, 0.7, r));
  }

  TEST_CASE("sample_snn atom frequencies follow a (1+|xi|)^-s") {
    const auto m = SpectralMeasure::atomic(1, {{{0.0}, 1.0, 0.0}, {{3.0}, 1.0, 0.0}});
    Rng r(4);
    int first = 0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) first += sample_snn(m, 0.5, r).atom == 0;
    const double p = 1.0 / 1.5;  // weights 1 and 1/2
    CHECK(std::abs(first / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
  }

  TEST_CASE("deep radius law") {
    CHECK(dnn_radius_from_uniform(0.5) == doctest::Approx(0.5));
    CHECK(dnn_radius_from_uniform(1e-12) < 1e-5);
    CHECK(dnn_radius_from_uniform(1.0 - 1e-12) > 1.0 - 1e-5);
    Rng r(12);
    const auto m = one({1.0});
    const int n = 100000;
    double s1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_dnn(m, 0.5, r).r;
      REQUIRE(x > 0.0);
      REQUIRE(x < 1.0);
      s1 += x;
    }
    // variance of r under (pi/2) sin(pi r): 1/4 - 2/pi^2
    const double sd = std::sqrt(0.25 - 2.0 / (pi * pi));
    CHECK(std::abs(s1 / n - 0.5) < 3.0 * sd / std::sqrt(n));
    CHECK_THROWS(sample_dnn(SpectralMeasure::empty(1), 0.5, r));
  }

  TEST_CASE("target lipschitz bounds finite differences") {
    const auto m = load_target(BARRON_DATA_DIR "/five_atom_d2.json");
    const double lip = target_lipschitz(m);
    Rng r(6);
    for (int i = 0; i < 2000; ++i) {
      std::vector<double> x{r.uniform(), r.uniform()}, y{r.uniform(), r.uniform()};
      const double dist = std::max(std::abs(x[0] - y[0]), std::abs(x[1] - y[1]));
      CHECK(std::abs(eval_target(m, x) - eval_target(m, y)) <= lip * dist + 1e-12);
    }
  }

  TEST_CASE("json round trip and errors") {
    const auto m = load_target(BARRON_DATA_DIR "/five_atom_d2.json");
    CHECK(m.atoms().size() == 5);
    CHECK(amplitude_sum(m) == doctest::Approx(1.0));
    const auto back = parse_target(target_to_json(m));
    for (double x : {0.1, 0.6}) {
      std::vector<double> p{x, 1.0 - x};
      CHECK(eval_target(back, p) == eval_target(m, p));
    }
    CHECK_THROWS_AS(parse_target("{"), ParseError);
    CHECK_THROWS_AS(parse_target(R"({"atoms": []})"), ParseError);
    CHECK_THROWS_AS(parse_target(R"({"d": 1, "atoms": [{"xi": [1, 2], "a": 1}]})"), ParseError);
    CHECK_THROWS_AS(parse_target(R"({"d": 1, "family": "gauss"})"), UnsupportedTarget);
    const auto b = parse_target(R"({"d": 2, "family": "bessel", "alpha": 0.5})");
    CHECK(b.mode() == SpectralMeasure::Mode::bessel);
    CHECK_THROWS_AS(load_target("/nonexistent/target.json"), ParseError);
  }

  TEST_CASE("continuous mode rejects atomic-only operations") {
    const auto b = SpectralMeasure::bessel(1, 1.0);
    Rng r(1);
    CHECK_THROWS_AS(sample_snn(b, 0.5, r), UnsupportedTarget);
    CHECK_THROWS_AS(normalizer_Q(b, 0.5), UnsupportedTarget);
    // evaluates through the radial integral
    CHECK(eval_target(b, std::vector<double>{0.0}) == doctest::Approx(0.5));
  }
}
