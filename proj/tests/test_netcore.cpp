#include <doctest.h>

#include <cmath>
#include <vector>

#include "barron/errors.hpp"
#include "barron/netcore.hpp"
#include "barron/pwl.hpp"
#include "barron/rng.hpp"

using namespace barron;

namespace {

ReluNetwork from_units(const ReluUnitList& u) {
  const int w = static_cast<int>(u.units.size());
  DenseLayer L{Eigen::MatrixXd(w, 1), Eigen::VectorXd(w)};
  Eigen::VectorXd out(w);
  for (int i = 0; i < w; ++i) {
    L.W(i, 0) = u.units[i].a;
    L.b(i) = -u.units[i].b;
    out(i) = u.units[i].c;
  }
  return ReluNetwork(1, {L}, out, u.constant);
}

ReluNetwork random_net(Rng& r, int d, std::vector<int> widths) {
  std::vector<DenseLayer> layers;
  int in = d;
  for (int w : widths) {
    DenseLayer L{Eigen::MatrixXd(w, in), Eigen::VectorXd(w)};
    for (int i = 0; i < w; ++i) {
      for (int j = 0; j < in; ++j) L.W(i, j) = r.normal();
      L.b(i) = 0.5 * r.normal();
    }
    layers.push_back(L);
    in = w;
  }
  Eigen::VectorXd out(in);
  for (int i = 0; i < in; ++i) out(i) = r.normal();
  return ReluNetwork(d, layers, out, r.normal());
}

double pt(const ReluNetwork& n, std::vector<double> x) { return n.forward(x); }

}  // namespace

TEST_SUITE("netcore") {
  TEST_CASE("trivial networks") {
    DenseLayer L{Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(3)};
    const ReluNetwork zero_w(2, {L}, Eigen::VectorXd::Zero(3), 1.75);
    CHECK(pt(zero_w, {0.2, 0.9}) == 1.75);

    DenseLayer G{Eigen::MatrixXd(2, 1), Eigen::VectorXd::Zero(2)};
    G.W << 1.0, -1.0;
    const ReluNetwork ident(1, {G}, Eigen::Vector2d(1.0, -1.0), 0.0);
    for (double t : {-2.0, -0.3, 0.0, 0.8}) CHECK(pt(ident, {t}) == doctest::Approx(t));
    CHECK(lipschitz_bound(ident) >= 1.0);

    const auto beta = from_units(to_relu_units(make_beta()));
    CHECK(pt(beta, {0.5}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pt(beta, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ReluNetwork(1, {}, Eigen::VectorXd(), 0.0), std::invalid_argument);
  }

  TEST_CASE("batch forward agrees with pointwise") {
    Rng r(1);
    const auto net = random_net(r, 3, {5, 4});
    Eigen::MatrixXd X(3, 20);
    for (int j = 0; j < 20; ++j)
      for (int i = 0; i < 3; ++i) X(i, j) = r.uniform();
    const Eigen::VectorXd y = net.forward_batch(X);
    for (int j = 0; j < 20; ++j) {
      CHECK(y(j) == doctest::Approx(net.forward(std::vector<double>{X(0, j), X(1, j), X(2, j)})));
    }
  }

  TEST_CASE("shallow units") {
    ShallowNet n;
    n.d = 2;
    n.units.push_back({1.0, Eigen::Vector2d(1.0, 0.0), -0.5, 1.0});
    CHECK(forward_shallow(n, std::vector<double>{0.7, 0.1}) == 1.0);
    CHECK(forward_shallow(n, std::vector<double>{0.3, 0.1}) == 0.0);

    // chi_[0,1)(t) = H(t) - H(t-1)
    ShallowNet chi;
    chi.d = 1;
    chi.units.push_back({1.0, Eigen::VectorXd::Constant(1, 1.0), 0.0, 1.0});
    chi.units.push_back({-1.0, Eigen::VectorXd::Constant(1, 1.0), -1.0, 1.0});
    CHECK(forward_shallow(chi, std::vector<double>{0.5}) == 1.0);
    CHECK(forward_shallow(chi, std::vector<double>{1.5}) == 0.0);
    CHECK(forward_shallow(chi, std::vector<double>{0.0}) == 1.0);
    CHECK(forward_shallow(chi, std::vector<double>{1.0}) == 0.0);

    CHECK(activate(Activation::clipped_ramp, 2.0) == 1.0);
    CHECK(activate(Activation::clipped_ramp, -2.0) == 0.0);
    CHECK(activate(Activation::logistic, 0.0) == doctest::Approx(0.5));
    for (auto a : {Activation::heaviside, Activation::clipped_ramp, Activation::logistic}) {
      CHECK(activation_from_name(activation_name(a)) == a);
    }
    CHECK_THROWS_AS(activation_from_name("tanh"), ParseError);
  }

  TEST_CASE("restriction of the hat network") {
    const auto beta = from_units(to_relu_units(make_beta()));
    const auto line = restrict_to_line(beta, std::vector<double>{0.0}, std::vector<double>{1.0}, -1.0, 2.0);
    CHECK(pwl_equal(line, make_beta(), 1e-12));
  }

  TEST_CASE("restriction matches forward and piece count") {
    Rng r(7);
    for (int trial = 0; trial < 10; ++trial) {
      const std::vector<int> widths{6, 5, 4};
      const auto net = random_net(r, 2, widths);
      const std::vector<double> base{r.uniform(), r.uniform()};
      const std::vector<double> dir{r.normal(), r.normal()};
      const auto line = restrict_to_line(net, base, dir);
      for (int i = 0; i < 100; ++i) {
        const double t = r.uniform();
        const double direct = pt(net, {base[0] + t * dir[0], base[1] + t * dir[1]});
        CHECK(std::abs(line(t) - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
      }
      CHECK(line.size() - 1 <= static_cast<std::size_t>(8 * 6 * 5 * 4));
    }
  }

  TEST_CASE("lipschitz bound") {
    DenseLayer L{Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2)};
    CHECK(lipschitz_bound(ReluNetwork(2, {L}, Eigen::VectorXd::Zero(2), 0.0)) == 0.0);
    Rng r(11);
    const auto net = random_net(r, 2, {8, 6});
    const double lip = lipschitz_bound(net);
    const auto normed = normalize_rows(net);
    CHECK(lipschitz_bound(normed) <= lip * (1 + 1e-12));
    for (int i = 0; i < 10000; ++i) {
      const std::vector<double> x{r.uniform(), r.uniform()}, y{r.uniform(), r.uniform()};
      const double dist = std::max(std::abs(x[0] - y[0]), std::abs(x[1] - y[1]));
      const double diff = std::abs(net.forward(x) - net.forward(y));
      CHECK(diff <= lipschitz_bound(normed) * dist + 1e-12);
      CHECK(normed.forward(x) == doctest::Approx(net.forward(x)).epsilon(1e-12));
    }
    const auto st = stats(net);
    CHECK(st.depth == 2);
    CHECK(st.parameters == static_cast<std::size_t>(8 * 2 + 8 + 6 * 8 + 6 + 6 + 1));
  }

  TEST_CASE("deepen and stack") {
    Rng r(2);
    const auto a = random_net(r, 2, {3});
    const auto b = random_net(r, 2, {4, 2});
    const auto a2 = deepen(a, 2);
    CHECK(a2.depth() == 2);
    const auto s = stack(a2, b);
    CHECK(s.widths() == std::vector<int>{7, 5});
    for (int i = 0; i < 100; ++i) {
      const std::vector<double> x{r.uniform(), r.uniform()};
      CHECK(a2.forward(x) == doctest::Approx(a.forward(x)));
      CHECK(s.forward(x) == doctest::Approx(a.forward(x) + b.forward(x)));
    }
    CHECK_THROWS(stack(a, b));
    CHECK_THROWS(deepen(b, 1));
  }

  TEST_CASE("embedding shallow nets") {
    Rng r(3);
    ShallowNet n;
    n.d = 2;
    n.c0 = 0.3;
    for (int i = 0; i < 4; ++i) n.units.push_back({r.normal(), Eigen::Vector2d(r.normal(), r.normal()), r.normal(), 1.0 + r.uniform()});
    n.act = Activation::clipped_ramp;
    const auto ramp_net = embed_shallow(n);
    for (int i = 0; i < 500; ++i) {
      const std::vector<double> x{r.uniform(), r.uniform()};
      CHECK(ramp_net.forward(x) == doctest::Approx(forward_shallow(n, x)).epsilon(1e-12));
    }
    n.act = Activation::heaviside;
    const auto step_net = embed_shallow(n, 1e6);
    for (int i = 0; i < 500; ++i) {
      const std::vector<double> x{r.uniform(), r.uniform()};
      bool near = false;
      for (const auto& u : n.units) near = near || std::abs(u.w.dot(Eigen::Vector2d(x[0], x[1])) + u.b) < 1e-5;
      if (!near) CHECK(step_net.forward(x) == doctest::Approx(forward_shallow(n, x)).epsilon(1e-9));
    }
    n.act = Activation::logistic;
    CHECK_THROWS_AS(embed_shallow(n), UnsupportedTarget);
  }

  TEST_CASE("serialization") {
    const auto beta = from_units(to_relu_units(make_beta()));
    const auto back = std::get<ReluNetwork>(deserialize(serialize(beta)));
    for (int i = 0; i <= 300; ++i) {
      const double t = -1.0 + i / 100.0;
      CHECK(pt(back, {t}) == pt(beta, {t}));
    }
    ShallowNet sn;
    sn.d = 1;
    sn.act = Activation::logistic;
    sn.c0 = -0.25;
    sn.units.push_back({2.0, Eigen::VectorXd::Constant(1, 3.0), -1.0, 7.0});
    const auto sb = std::get<ShallowNet>(deserialize(serialize(sn)));
    CHECK(sb.act == Activation::logistic);
    CHECK(forward_shallow(sb, std::vector<double>{0.4}) == forward_shallow(sn, std::vector<double>{0.4}));

    CHECK_THROWS_AS(deserialize("not json"), ParseError);
    CHECK_THROWS_AS(deserialize(R"({"version":1,"kind":"relu","d":1,"layers":[{"W":[],"b":[]}],"out":{"W":[],"b":0}})"),
                    ParseError);
    CHECK_THROWS_AS(deserialize(R"({"version":1,"kind":"relu","d":1,"layers":[],"out":{"W":[],"b":0}})"), ParseError);
    CHECK_THROWS_AS(deserialize(R"({"version":2,"kind":"relu","d":1,"layers":[]})"), UnsupportedVersion);
  }
}
