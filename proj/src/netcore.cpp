#include "barron/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "barron/errors.hpp"

namespace barron {
namespace {

using nlohmann::json;

Eigen::VectorXd to_vector(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

// Pre-activations of hidden layer `layer` at input x.
Eigen::VectorXd preactivation(const ReluNetwork& net, const Eigen::VectorXd& x, int layer) {
  Eigen::VectorXd a = x;
  for (int l = 0;; ++l) {
    const auto& L = net.hidden()[static_cast<std::size_t>(l)];
    Eigen::VectorXd z = L.W * a + L.b;
    if (l == layer) return z;
    a = z.cwiseMax(0.0);
  }
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(M.cols()));
    for (Eigen::Index j = 0; j < M.cols(); ++j) row[static_cast<std::size_t>(j)] = M(i, j);
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("network file: \"") + what + "\" must be an array");
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd matrix_from_json(const json& j, int cols) {
  if (!j.is_array() || j.empty()) throw ParseError("network file: empty layer");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto row = j[i].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != cols) throw ParseError("network file: ragged weight matrix");
    for (int c = 0; c < cols; ++c) M(static_cast<Eigen::Index>(i), c) = row[static_cast<std::size_t>(c)];
  }
  return M;
}

}  // namespace

ReluNetwork::ReluNetwork(int d, std::vector<DenseLayer> hidden, Eigen::VectorXd out_w, double out_b)
    : d_(d), hidden_(std::move(hidden)), out_w_(std::move(out_w)), out_b_(out_b) {
  if (d < 1) throw std::invalid_argument("ReluNetwork: input dimension must be positive");
  if (hidden_.empty()) throw std::invalid_argument("ReluNetwork: need at least one hidden layer");
  Eigen::Index in = d;
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    const auto& L = hidden_[l];
    if (L.W.rows() < 1) throw std::invalid_argument("ReluNetwork: hidden layer of width zero");
    if (L.W.cols() != in || L.b.size() != L.W.rows()) {
      throw std::invalid_argument("ReluNetwork: inconsistent shapes at layer " + std::to_string(l));
    }
    in = L.W.rows();
  }
  if (out_w_.size() != in) throw std::invalid_argument("ReluNetwork: output row has wrong length");
}

std::vector<int> ReluNetwork::widths() const {
  std::vector<int> w;
  for (const auto& L : hidden_) w.push_back(static_cast<int>(L.W.rows()));
  return w;
}

double ReluNetwork::forward(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("forward: input has wrong dimension");
  Eigen::VectorXd a = to_vector(x);
  for (const auto& L : hidden_) a = (L.W * a + L.b).cwiseMax(0.0);
  return out_w_.dot(a) + out_b_;
}

Eigen::VectorXd ReluNetwork::forward_batch(const Eigen::MatrixXd& X) const {
  if (X.rows() != d_) throw std::invalid_argument("forward_batch: input has wrong dimension");
  Eigen::MatrixXd A = X;
  for (const auto& L : hidden_) {
    Eigen::MatrixXd Z = L.W * A;
    Z.colwise() += L.b;
    A = Z.cwiseMax(0.0);
  }
  Eigen::VectorXd out = A.transpose() * out_w_;
  out.array() += out_b_;
  return out;
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::heaviside: return "heaviside";
    case Activation::clipped_ramp: return "clipped_ramp";
    case Activation::logistic: return "logistic";
  }
  return "unknown";
}

Activation activation_from_name(const std::string& name) {
  if (name == "heaviside") return Activation::heaviside;
  if (name == "clipped_ramp") return Activation::clipped_ramp;
  if (name == "logistic") return Activation::logistic;
  throw ParseError("unknown activation family \"" + name + "\"");
}

double activate(Activation a, double t) {
  switch (a) {
    case Activation::heaviside: return t >= 0.0 ? 1.0 : 0.0;
    case Activation::clipped_ramp: return std::clamp(t, 0.0, 1.0);
    case Activation::logistic:
      return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
  }
  return 0.0;
}

double forward_shallow(const ShallowNet& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.d) {
    throw std::invalid_argument("forward_shallow: input has wrong dimension");
  }
  const Eigen::VectorXd v = to_vector(x);
  double sum = net.c0;
  for (const auto& u : net.units) sum += u.c * activate(net.act, u.tau * (u.w.dot(v) + u.b));
  return sum;
}

Eigen::VectorXd forward_shallow_batch(const ShallowNet& net, const Eigen::MatrixXd& X) {
  if (X.rows() != net.d) throw std::invalid_argument("forward_shallow_batch: wrong dimension");
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.cols(), net.c0);
  if (net.units.empty()) return out;
  const auto k = static_cast<Eigen::Index>(net.units.size());
  Eigen::MatrixXd W(k, net.d);
  Eigen::VectorXd b(k), c(k), tau(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& u = net.units[static_cast<std::size_t>(i)];
    W.row(i) = u.w.transpose();
    b(i) = u.b;
    c(i) = u.c;
    tau(i) = u.tau;
  }
  Eigen::MatrixXd Z = W * X;
  Z.colwise() += b;
  Z = tau.asDiagonal() * Z;
  const Activation act = net.act;
  Z = Z.unaryExpr([act](double t) { return activate(act, t); });
  out += Z.transpose() * c;
  return out;
}

PiecewiseLinear restrict_to_line(const ReluNetwork& net, std::span<const double> base,
                                 std::span<const double> dir, double t0, double t1) {
  const int d = net.input_dim();
  if (static_cast<int>(base.size()) != d || static_cast<int>(dir.size()) != d) {
    throw std::invalid_argument("restrict_to_line: base/dir have wrong dimension");
  }
  if (!(t1 > t0)) throw std::invalid_argument("restrict_to_line: need t1 > t0");
  const Eigen::VectorXd x0 = to_vector(base);
  const Eigen::VectorXd v = to_vector(dir);
  if (v.lpNorm<Eigen::Infinity>() == 0.0) throw std::invalid_argument("restrict_to_line: zero direction");
  const double min_gap = 1e-14 * (t1 - t0);

  std::vector<double> T{t0, t1};
  std::vector<Eigen::VectorXd> act;  // post-activations of the current layer at T
  for (int layer = 0; layer < net.depth(); ++layer) {
    std::vector<Eigen::VectorXd> Z;
    Z.reserve(T.size());
    for (double t : T) Z.push_back(preactivation(net, x0 + t * v, layer));
    std::vector<double> T2;
    std::vector<Eigen::VectorXd> Z2;
    std::vector<double> cross;
    for (std::size_t k = 0; k < T.size(); ++k) {
      T2.push_back(T[k]);
      Z2.push_back(Z[k]);
      if (k + 1 == T.size()) break;
      cross.clear();
      const auto& za = Z[k];
      const auto& zb = Z[k + 1];
      for (Eigen::Index i = 0; i < za.size(); ++i) {
        if ((za(i) > 0.0 && zb(i) < 0.0) || (za(i) < 0.0 && zb(i) > 0.0)) {
          const double t = T[k] + (T[k + 1] - T[k]) * za(i) / (za(i) - zb(i));
          if (t - T[k] > min_gap && T[k + 1] - t > min_gap) cross.push_back(t);
        }
      }
      std::sort(cross.begin(), cross.end());
      double last = T[k];
      for (double t : cross) {
        if (t - last <= min_gap) continue;
        T2.push_back(t);
        Z2.push_back(preactivation(net, x0 + t * v, layer));
        last = t;
      }
    }
    T = std::move(T2);
    act.clear();
    for (auto& z : Z2) act.push_back(z.cwiseMax(0.0));
  }
  std::vector<double> y;
  y.reserve(T.size());
  for (const auto& a : act) y.push_back(net.out_w().dot(a) + net.out_b());
  return PiecewiseLinear(std::move(T), std::move(y));
}

double lipschitz_bound(const ReluNetwork& net) {
  double bound = net.out_w().lpNorm<1>();
  for (const auto& L : net.hidden()) {
    bound *= L.W.cwiseAbs().rowwise().sum().maxCoeff();
  }
  return bound;
}

ReluNetwork normalize_rows(const ReluNetwork& net) {
  std::vector<DenseLayer> layers = net.hidden();
  Eigen::VectorXd out = net.out_w();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& L = layers[l];
    const Eigen::VectorXd norms = L.W.cwiseAbs().rowwise().sum();
    for (Eigen::Index i = 0; i < norms.size(); ++i) {
      const double rho = norms(i);
      if (rho == 0.0) continue;
      L.W.row(i) /= rho;
      L.b(i) /= rho;
      if (l + 1 < layers.size()) {
        layers[l + 1].W.col(i) *= rho;
      } else {
        out(i) *= rho;
      }
    }
  }
  return ReluNetwork(net.input_dim(), std::move(layers), std::move(out), net.out_b());
}

NetworkStats stats(const ReluNetwork& net) {
  NetworkStats s;
  s.depth = net.depth();
  s.widths = net.widths();
  for (const auto& L : net.hidden()) s.parameters += static_cast<std::size_t>(L.W.size() + L.b.size());
  s.parameters += static_cast<std::size_t>(net.out_w().size()) + 1;
  s.lipschitz = lipschitz_bound(net);
  return s;
}

ReluNetwork embed_shallow(const ShallowNet& net, double ramp) {
  if (net.act == Activation::logistic) {
    throw UnsupportedTarget("embed_shallow: logistic units have no exact ReLU form");
  }
  if (!(ramp > 0.0)) throw std::invalid_argument("embed_shallow: ramp must be positive");
  const auto k = static_cast<Eigen::Index>(std::max<std::size_t>(net.units.size(), 1));
  DenseLayer L{Eigen::MatrixXd::Zero(2 * k, net.d), Eigen::VectorXd::Zero(2 * k)};
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * k);
  for (std::size_t i = 0; i < net.units.size(); ++i) {
    const auto& u = net.units[i];
    const auto r = static_cast<Eigen::Index>(2 * i);
    if (net.act == Activation::clipped_ramp) {
      // clamp(tau z, 0, 1) = ReLU(tau z) - ReLU(tau z - 1)
      L.W.row(r) = u.tau * u.w.transpose();
      L.W.row(r + 1) = u.tau * u.w.transpose();
      L.b(r) = u.tau * u.b;
      L.b(r + 1) = u.tau * u.b - 1.0;
    } else {
      L.W.row(r) = ramp * u.w.transpose();
      L.W.row(r + 1) = ramp * u.w.transpose();
      L.b(r) = ramp * u.b + 1.0;
      L.b(r + 1) = ramp * u.b;
    }
    out(r) = u.c;
    out(r + 1) = -u.c;
  }
  return ReluNetwork(net.d, {std::move(L)}, std::move(out), net.c0);
}

ReluNetwork deepen(const ReluNetwork& net, int depth) {
  if (depth < net.depth()) throw std::invalid_argument("deepen: target depth below current depth");
  std::vector<DenseLayer> layers = net.hidden();
  while (static_cast<int>(layers.size()) < depth) {
    const auto w = layers.back().W.rows();
    layers.push_back(DenseLayer{Eigen::MatrixXd::Identity(w, w), Eigen::VectorXd::Zero(w)});
  }
  return ReluNetwork(net.input_dim(), std::move(layers), net.out_w(), net.out_b());
}

ReluNetwork stack(const ReluNetwork& a, const ReluNetwork& b) {
  if (a.depth() != b.depth() || a.input_dim() != b.input_dim()) {
    throw std::invalid_argument("stack: networks differ in depth or input dimension");
  }
  std::vector<DenseLayer> layers;
  for (int l = 0; l < a.depth(); ++l) {
    const auto& A = a.hidden()[static_cast<std::size_t>(l)];
    const auto& B = b.hidden()[static_cast<std::size_t>(l)];
    DenseLayer L;
    if (l == 0) {
      L.W.resize(A.W.rows() + B.W.rows(), a.input_dim());
      L.W << A.W, B.W;
    } else {
      L.W = Eigen::MatrixXd::Zero(A.W.rows() + B.W.rows(), A.W.cols() + B.W.cols());
      L.W.topLeftCorner(A.W.rows(), A.W.cols()) = A.W;
      L.W.bottomRightCorner(B.W.rows(), B.W.cols()) = B.W;
    }
    L.b.resize(A.b.size() + B.b.size());
    L.b << A.b, B.b;
    layers.push_back(std::move(L));
  }
  Eigen::VectorXd out(a.out_w().size() + b.out_w().size());
  out << a.out_w(), b.out_w();
  return ReluNetwork(a.input_dim(), std::move(layers), std::move(out), a.out_b() + b.out_b());
}

std::string serialize(const ReluNetwork& net) {
  json doc;
  doc["version"] = 1;
  doc["kind"] = "relu";
  doc["d"] = net.input_dim();
  doc["layers"] = json::array();
  for (const auto& L : net.hidden()) {
    doc["layers"].push_back({{"W", matrix_json(L.W)}, {"b", vector_json(L.b)}});
  }
  doc["out"] = {{"W", vector_json(net.out_w())}, {"b", net.out_b()}};
  doc["activation"] = {{"family", "relu"}};
  return doc.dump();
}

std::string serialize(const ShallowNet& net) {
  json doc;
  doc["version"] = 1;
  doc["kind"] = "shallow";
  doc["d"] = net.d;
  json W = json::array(), b = json::array(), c = json::array(), tau = json::array();
  for (const auto& u : net.units) {
    W.push_back(std::vector<double>(u.w.data(), u.w.data() + u.w.size()));
    b.push_back(u.b);
    c.push_back(u.c);
    tau.push_back(u.tau);
  }
  doc["layers"] = json::array({{{"W", W}, {"b", b}}});
  doc["out"] = {{"W", c}, {"b", net.c0}};
  doc["activation"] = {{"family", activation_name(net.act)}, {"tau", tau}};
  return doc.dump();
}

std::variant<ReluNetwork, ShallowNet> deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("network file: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("network file: top level must be an object");
    if (!doc.contains("version")) throw ParseError("network file: missing \"version\"");
    const int version = doc.at("version").get<int>();
    if (version != 1) {
      throw UnsupportedVersion("network file: unsupported version " + std::to_string(version));
    }
    const auto kind = doc.at("kind").get<std::string>();
    const int d = doc.at("d").get<int>();
    if (d < 1) throw ParseError("network file: \"d\" must be positive");
    const auto& layers = doc.at("layers");
    if (!layers.is_array() || layers.empty()) throw ParseError("network file: no layers");
    const auto& out = doc.at("out");
    Eigen::VectorXd out_w = vector_from_json(out.at("W"), "out.W");
    const double out_b = out.at("b").get<double>();

    if (kind == "relu") {
      std::vector<DenseLayer> hidden;
      int in = d;
      for (const auto& L : layers) {
        DenseLayer layer{matrix_from_json(L.at("W"), in), vector_from_json(L.at("b"), "b")};
        if (layer.b.size() != layer.W.rows()) throw ParseError("network file: bias length mismatch");
        in = static_cast<int>(layer.W.rows());
        hidden.push_back(std::move(layer));
      }
      if (out_w.size() != in) throw ParseError("network file: output row has wrong length");
      return ReluNetwork(d, std::move(hidden), std::move(out_w), out_b);
    }
    if (kind == "shallow") {
      if (layers.size() != 1) throw ParseError("network file: shallow nets have exactly one layer");
      const auto& L = layers[0];
      const auto& Wj = L.at("W");
      const Eigen::VectorXd b = vector_from_json(L.at("b"), "b");
      const auto& act = doc.at("activation");
      ShallowNet net;
      net.d = d;
      net.c0 = out_b;
      net.act = activation_from_name(act.at("family").get<std::string>());
      const Eigen::VectorXd tau = vector_from_json(act.at("tau"), "tau");
      const auto k = static_cast<Eigen::Index>(Wj.size());
      if (b.size() != k || out_w.size() != k || tau.size() != k) {
        throw ParseError("network file: shallow unit arrays differ in length");
      }
      const Eigen::MatrixXd W = k > 0 ? matrix_from_json(Wj, d) : Eigen::MatrixXd(0, d);
      for (Eigen::Index i = 0; i < k; ++i) {
        net.units.push_back(ShallowUnit{out_w(i), W.row(i).transpose(), b(i), tau(i)});
      }
      return net;
    }
    throw ParseError("network file: unknown kind \"" + kind + "\"");
  } catch (const json::exception& e) {
    throw ParseError(std::string("network file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("network file: ") + e.what());
  }
}

}  // namespace barron
