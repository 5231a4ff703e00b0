#include "barron/build.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "barron/multiscale.hpp"
#include "barron/pwl.hpp"

namespace barron {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_config(const BuildConfig& cfg) {
  if (!(cfg.s > 0.0 && cfg.s <= 0.5)) throw std::invalid_argument("build: s must lie in (0, 1/2]");
  if (cfg.L < 1) throw std::invalid_argument("build: L must be positive");
  if (cfg.m < 1) throw std::invalid_argument("build: sample count m must be positive");
  if (cfg.attempts < 1) throw std::invalid_argument("build: attempts must be positive");
  if (cfg.width_budget && *cfg.width_budget < 1) throw std::invalid_argument("build: width budget must be positive");
  if (!(cfg.p >= 1.0)) throw std::invalid_argument("build: p must be >= 1");
}

void require_nonempty_atomic(const SpectralMeasure& m, const char* op) {
  if (!m.is_atomic()) throw UnsupportedTarget(std::string(op) + ": requires an atomic target");
  if (m.empty()) throw std::invalid_argument(std::string(op) + ": empty spectral measure");
}

// One deep block: hidden layers local to the block plus its readout.
struct Block {
  std::vector<Eigen::MatrixXd> W;
  std::vector<Eigen::VectorXd> b;
  Eigen::VectorXd out;
  double constant = 0.0;
};

ReluNetwork assemble(int d, int L, const std::vector<Block>& blocks, double constant) {
  std::vector<Eigen::Index> width(static_cast<std::size_t>(L), 0);
  for (const auto& blk : blocks) {
    for (int l = 0; l < L; ++l) width[static_cast<std::size_t>(l)] += blk.W[static_cast<std::size_t>(l)].rows();
  }
  const bool empty = width[0] == 0;
  if (empty) std::fill(width.begin(), width.end(), 1);  // a single dead unit

  std::vector<DenseLayer> layers;
  for (int l = 0; l < L; ++l) {
    const auto rows = width[static_cast<std::size_t>(l)];
    const auto cols = l == 0 ? static_cast<Eigen::Index>(d) : width[static_cast<std::size_t>(l - 1)];
    layers.push_back(DenseLayer{Eigen::MatrixXd::Zero(rows, cols), Eigen::VectorXd::Zero(rows)});
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(width.back());
  double bias = constant;
  if (!empty) {
    std::vector<Eigen::Index> row(static_cast<std::size_t>(L), 0);
    for (const auto& blk : blocks) {
      for (int l = 0; l < L; ++l) {
        const auto li = static_cast<std::size_t>(l);
        const auto& Wb = blk.W[li];
        // the block's previous-layer rows start where its current offset says
        const Eigen::Index col = l == 0 ? 0 : row[li - 1];
        layers[li].W.block(row[li], col, Wb.rows(), Wb.cols()) = Wb;
        layers[li].b.segment(row[li], Wb.rows()) = blk.b[li];
      }
      out.segment(row.back(), blk.out.size()) = blk.out;
      for (int l = 0; l < L; ++l) row[static_cast<std::size_t>(l)] += blk.W[static_cast<std::size_t>(l)].rows();
      bias += blk.constant;
    }
  }
  return ReluNetwork(d, std::move(layers), std::move(out), bias);
}

}  // namespace

int BuildReport::max_width() const {
  return widths.empty() ? 0 : *std::max_element(widths.begin(), widths.end());
}

std::string report_to_json(const BuildReport& r) {
  nlohmann::json doc;
  doc["widths"] = r.widths;
  doc["unit_count"] = r.unit_count;
  doc["unit_bound"] = r.unit_bound;
  doc["scale"] = r.scale;
  doc["attempt"] = r.attempt;
  doc["estimated_error"] = std::isnan(r.estimated_error) ? nlohmann::json(nullptr)
                                                         : nlohmann::json(r.estimated_error);
  doc["samples"] = r.samples;
  doc["zero_frequency_samples"] = r.zero_frequency_samples;
  return doc.dump(2);
}

BuildConfig parse_build_config(const std::string& json_text, BuildConfig cfg) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
    if (!doc.is_object()) throw ParseError("build config: top level must be an object");
    if (doc.contains("s")) cfg.s = doc.at("s").get<double>();
    if (doc.contains("L")) cfg.L = doc.at("L").get<int>();
    if (doc.contains("m")) cfg.m = doc.at("m").get<int>();
    if (doc.contains("attempts")) cfg.attempts = doc.at("attempts").get<int>();
    if (doc.contains("width_budget") && !doc.at("width_budget").is_null()) {
      cfg.width_budget = doc.at("width_budget").get<int>();
    }
    if (doc.contains("p")) cfg.p = doc.at("p").get<double>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("build config: ") + e.what());
  }
  return cfg;
}

std::pair<ShallowNet, BuildReport> build_shallow_heaviside(const SpectralMeasure& m,
                                                           const BuildConfig& cfg, Rng& rng) {
  check_config(cfg);
  require_nonempty_atomic(m, "build_shallow_heaviside");
  if (cfg.L != 1) throw std::invalid_argument("build_shallow_heaviside: requires L = 1");
  const double s = cfg.s;
  const double q = std::pow(2.0, -(1.0 + s));
  const double Q = normalizer_Q(m, s);
  const double scale = Q / ((1.0 - q) * cfg.m);
  const ScalarFn g = [](double t) { return std::cos(kTwoPi * t); };

  ShallowNet net;
  net.d = m.dim();
  net.act = Activation::heaviside;
  BuildReport rep;
  rep.scale = scale;
  rep.samples = cfg.m;
  std::vector<double> alpha;
  for (int i = 0; i < cfg.m; ++i) {
    const SnnSample smp = sample_snn(m, s, rng);
    const SpectralAtom& atom = m.atoms()[smp.atom];
    const double xi1 = l1_norm(atom.xi);
    if (xi1 == 0.0) {
      // the expectation over the level is Q cos(phi) / m exactly
      net.c0 += Q * std::cos(atom.phi) / cfg.m;
      ++rep.zero_frequency_samples;
      continue;
    }
    const int l = static_cast<int>(std::min<std::uint64_t>(smp.level, 1000));
    const double theta = phase_offset(atom);
    const IndexRange J = active_indices(atom.xi, l, theta);
    const double two_l = std::ldexp(1.0, l);
    const double ci = scale * std::pow(2.0, (1.0 + s) * l) * std::pow(1.0 + xi1, s);
    rep.unit_bound += 2.0 * two_l * (1.0 + xi1);

    alpha.clear();
    for (std::int64_t j = J.lo; j <= J.hi; ++j) alpha.push_back(multiscale_coeff(g, l, j));
    // sum_j alpha_j [H(v - j) - H(v - j - 1)] = sum_e (alpha_e - alpha_{e-1}) H(v - e);
    // H(v - J.lo) = 1 and H(v - J.hi - 1) = 0 on the cube.
    net.c0 += ci * alpha.front();
    Eigen::VectorXd w(m.dim());
    for (int k = 0; k < m.dim(); ++k) w(k) = two_l * atom.xi[static_cast<std::size_t>(k)];
    for (std::size_t k = 1; k < alpha.size(); ++k) {
      const double coef = alpha[k] - alpha[k - 1];
      if (std::abs(coef) < 1e-14) continue;
      const double e = static_cast<double>(J.lo + static_cast<std::int64_t>(k));
      net.units.push_back(ShallowUnit{ci * coef, w, two_l * theta - e, 1.0});
    }
  }
  rep.unit_count = net.units.size();
  rep.widths = {static_cast<int>(net.units.size())};
  return {std::move(net), rep};
}

double sigmoid_tail_bound(Activation family, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("sigmoid_tail_bound: eps must lie in (0, 1/2)");
  switch (family) {
    case Activation::logistic: return std::log(1.0 / eps - 1.0);
    case Activation::clipped_ramp: return 1.0;
    case Activation::heaviside: break;
  }
  throw UnsupportedTarget("heaviside_to_sigmoidal: family has no registered tail bound");
}

ShallowNet heaviside_to_sigmoidal(const ShallowNet& net, Activation family, double eps, double p) {
  if (net.act != Activation::heaviside) {
    throw std::invalid_argument("heaviside_to_sigmoidal: input must use the Heaviside activation");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("heaviside_to_sigmoidal: p must be >= 1");
  // Each unit's error splits into the tail (< eps') and a strip of width
  // 2 delta / (tau |w|) whose cross-sections have area <= sqrt(2), where the
  // deviation is at most 1 + sup|sigma| = 2; both parts get eps'^p.
  const double eps_prime = eps * std::pow(2.0, -1.0 / p);
  const double delta = sigmoid_tail_bound(family, eps_prime);
  ShallowNet out = net;
  out.act = family;
  for (auto& u : out.units) {
    const double wn = u.w.norm();
    if (wn == 0.0) {
      out.c0 += u.c * activate(Activation::heaviside, u.b);
      u.c = 0.0;
      continue;
    }
    u.tau = 2.0 * std::sqrt(2.0) * delta * std::pow(2.0, p) / (std::pow(eps_prime, p) * wn);
  }
  std::erase_if(out.units, [](const ShallowUnit& u) { return u.c == 0.0 && u.w.norm() == 0.0; });
  return out;
}

int deep_base_frequency(double xi_l1, int L) {
  if (L < 1) throw std::invalid_argument("deep_base_frequency: L must be positive");
  const double target = 1.0 + xi_l1;
  int n = std::max(1, static_cast<int>(std::floor(std::pow(target, 1.0 / L))) - 1);
  while (std::pow(static_cast<double>(n), L) < target) ++n;
  return n;
}

double deep_total_frequency(double xi_l1, int L) {
  const int n = deep_base_frequency(xi_l1, L);
  return std::ldexp(std::pow(static_cast<double>(n), L), L - 1);
}

int deep_block_width(double xi_l1, int L) {
  const int n = deep_base_frequency(xi_l1, L);
  return 4 * n;
}

double shallow_expected_units(const SpectralMeasure& m, double s) {
  require_nonempty_atomic(m, "shallow_expected_units");
  const double q = std::pow(2.0, -(1.0 + s));
  if (!(q < 0.5)) throw std::invalid_argument("shallow_expected_units: s must be positive");
  const double Q = normalizer_Q(m, s);
  // level 0 has alpha_{0,j} = g(j) constant, so no edges; level l >= 1 has at
  // most 2^l |xi|_1 + 1 of them.  E[2^l; l >= 1] = 2q(1-q)/(1-2q).
  double e_xi = 0.0;
  for (const auto& atom : m.atoms()) {
    const double xi1 = l1_norm(atom.xi);
    if (xi1 > 0.0) e_xi += atom.a * std::pow(1.0 + xi1, -s) * xi1;
  }
  double p_nonzero = 0.0;
  for (const auto& atom : m.atoms()) {
    if (l1_norm(atom.xi) > 0.0) p_nonzero += atom.a * std::pow(1.0 + l1_norm(atom.xi), -s);
  }
  return (2.0 * q * (1.0 - q) / (1.0 - 2.0 * q) * e_xi + q * p_nonzero) / Q;
}

std::pair<ReluNetwork, BuildReport> build_deep(const SpectralMeasure& m, const BuildConfig& cfg,
                                               Rng& rng) {
  check_config(cfg);
  require_nonempty_atomic(m, "build_deep");
  const double s = cfg.s;
  const int L = cfg.L;
  if (!(s * L <= 0.5)) throw std::invalid_argument("build_deep: requires 0 < sL <= 1/2");
  const int d = m.dim();
  const double Q = normalizer_Q(m, s);
  const double scale = kTwoPi * Q / cfg.m;

  std::map<int, ReluUnitList> beta_cache;
  const auto beta_units = [&](int n) -> const ReluUnitList& {
    auto it = beta_cache.find(n);
    if (it == beta_cache.end()) {
      it = beta_cache.emplace(n, to_relu_units(periodize(make_beta(), n))).first;
    }
    return it->second;
  };

  BuildReport rep;
  rep.scale = scale;
  rep.samples = cfg.m;
  std::vector<Block> blocks;
  double constant = 0.0;
  for (int i = 0; i < cfg.m; ++i) {
    const DnnSample smp = sample_dnn(m, s, rng);
    const SpectralAtom& atom = m.atoms()[smp.atom];
    const double xi1 = l1_norm(atom.xi);
    if (xi1 == 0.0) {
      // the expectation over r is Q cos(phi) / m exactly
      constant += Q * std::cos(atom.phi) / cfg.m;
      ++rep.zero_frequency_samples;
      continue;
    }
    const int n = deep_base_frequency(xi1, L);
    const double nxi = deep_total_frequency(xi1, L);
    const double theta = phase_offset(atom);
    const double pref = scale * std::pow(1.0 + xi1, s);
    const ReluUnitList gamma = to_relu_units(periodize(make_gamma(smp.r), n));
    rep.unit_bound += L == 1 ? 4.0 * n : 4.0 * n + 2.0 * n * (L - 1);

    Block blk;
    // layer 0 consumes t = (xi . x + theta) / n_xi
    const ReluUnitList& first = L == 1 ? gamma : beta_units(n);
    {
      const auto k = static_cast<Eigen::Index>(first.units.size());
      Eigen::MatrixXd W(k, d);
      Eigen::VectorXd b(k);
      for (Eigen::Index u = 0; u < k; ++u) {
        const auto& unit = first.units[static_cast<std::size_t>(u)];
        for (int c = 0; c < d; ++c) W(u, c) = unit.a * atom.xi[static_cast<std::size_t>(c)] / nxi;
        b(u) = unit.a * theta / nxi - unit.b;
      }
      blk.W.push_back(std::move(W));
      blk.b.push_back(std::move(b));
    }
    // later layers consume y = sum c_k h_k + const of the previous compiled function
    const ReluUnitList* prev = &first;
    for (int l = 1; l < L; ++l) {
      const ReluUnitList& cur = l + 1 == L ? gamma : beta_units(n);
      const auto rows = static_cast<Eigen::Index>(cur.units.size());
      const auto cols = static_cast<Eigen::Index>(prev->units.size());
      Eigen::MatrixXd W(rows, cols);
      Eigen::VectorXd b(rows);
      for (Eigen::Index u = 0; u < rows; ++u) {
        const auto& unit = cur.units[static_cast<std::size_t>(u)];
        for (Eigen::Index c = 0; c < cols; ++c) {
          W(u, c) = unit.a * prev->units[static_cast<std::size_t>(c)].c;
        }
        b(u) = unit.a * prev->constant - unit.b;
      }
      blk.W.push_back(std::move(W));
      blk.b.push_back(std::move(b));
      prev = &cur;
    }
    blk.out.resize(static_cast<Eigen::Index>(gamma.units.size()));
    for (std::size_t u = 0; u < gamma.units.size(); ++u) {
      blk.out(static_cast<Eigen::Index>(u)) = pref * gamma.units[u].c;
    }
    blk.constant = pref * gamma.constant;
    rep.unit_count += gamma.units.size() + (L > 1 ? (L - 1) * beta_units(n).units.size() : 0);
    blocks.push_back(std::move(blk));
  }
  ReluNetwork net = assemble(d, L, blocks, constant);
  rep.widths = net.widths();
  return {std::move(net), rep};
}

std::pair<NetVariant, BuildReport> build_split(const SpectralMeasure& m, const BuildConfig& cfg,
                                               Rng& rng, bool deep, double R) {
  check_config(cfg);
  require_nonempty_atomic(m, "build_split");
  auto [low, high] = frequency_split(m, R);
  BuildConfig low_cfg = cfg;
  low_cfg.s = std::min(0.5, 0.5 / cfg.L);

  const auto build_one = [&](const SpectralMeasure& part, const BuildConfig& c,
                             Rng& r) -> std::pair<NetVariant, BuildReport> {
    if (deep) {
      auto [net, rep] = build_deep(part, c, r);
      return {NetVariant(std::move(net)), rep};
    }
    auto [net, rep] = build_shallow_heaviside(part, c, r);
    return {NetVariant(std::move(net)), rep};
  };
  if (high.empty()) return build_one(low, low_cfg, rng);
  if (low.empty()) return build_one(high, cfg, rng);

  // samples shared in proportion to amplitude mass
  const double a_low = amplitude_sum(low), a_high = amplitude_sum(high);
  low_cfg.m = std::max(1, static_cast<int>(std::lround(cfg.m * a_low / (a_low + a_high))));
  BuildConfig high_cfg = cfg;
  high_cfg.m = std::max(1, cfg.m - low_cfg.m);
  Rng r_low = rng.split(1), r_high = rng.split(2);
  auto lo = build_one(low, low_cfg, r_low);
  auto hi = build_one(high, high_cfg, r_high);

  BuildReport rep;
  rep.unit_count = lo.second.unit_count + hi.second.unit_count;
  rep.unit_bound = lo.second.unit_bound + hi.second.unit_bound;
  rep.scale = hi.second.scale;
  rep.samples = lo.second.samples + hi.second.samples;
  rep.zero_frequency_samples = lo.second.zero_frequency_samples + hi.second.zero_frequency_samples;
  if (deep) {
    ReluNetwork merged = stack(std::get<ReluNetwork>(lo.first), std::get<ReluNetwork>(hi.first));
    rep.widths = merged.widths();
    return {NetVariant(std::move(merged)), rep};
  }
  ShallowNet merged = std::get<ShallowNet>(lo.first);
  const auto& other = std::get<ShallowNet>(hi.first);
  merged.units.insert(merged.units.end(), other.units.begin(), other.units.end());
  merged.c0 += other.c0;
  rep.widths = {static_cast<int>(merged.units.size())};
  return {NetVariant(std::move(merged)), rep};
}

}  // namespace barron
