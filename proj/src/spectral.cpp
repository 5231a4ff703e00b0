#include "barron/spectral.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "barron/bessel.hpp"
#include "barron/errors.hpp"

namespace barron {
namespace {

constexpr int kMaxDim = 16;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) {
    throw std::invalid_argument("dimension must lie in [1, 16], got " + std::to_string(d));
  }
}

void validate_atom(const SpectralAtom& atom, int d) {
  if (static_cast<int>(atom.xi.size()) != d) {
    throw std::invalid_argument("atom frequency has length " + std::to_string(atom.xi.size()) +
                                ", expected " + std::to_string(d));
  }
  for (double v : atom.xi) {
    if (!std::isfinite(v)) throw std::invalid_argument("atom frequency is not finite");
  }
  if (!std::isfinite(atom.a) || atom.a < 0.0) {
    throw std::invalid_argument("atom amplitude must be finite and nonnegative");
  }
  if (!std::isfinite(atom.phi)) throw std::invalid_argument("atom phase is not finite");
}

void require_atomic(const SpectralMeasure& m, const char* op) {
  if (!m.is_atomic()) {
    throw UnsupportedTarget(std::string(op) + ": requires an atomic spectral measure");
  }
}

// Cumulative sampling weights a_k (1 + |xi_k|_1)^{-s}.
std::vector<double> xi_cumulative(const SpectralMeasure& m, double s, const char* op) {
  require_atomic(m, op);
  if (m.empty()) throw std::invalid_argument(std::string(op) + ": empty spectral measure");
  std::vector<double> cum;
  cum.reserve(m.atoms().size());
  double acc = 0.0;
  for (const auto& atom : m.atoms()) {
    acc += atom.a * std::pow(1.0 + l1_norm(atom.xi), -s);
    cum.push_back(acc);
  }
  if (!(acc > 0.0)) throw std::invalid_argument(std::string(op) + ": measure has zero mass");
  return cum;
}

}  // namespace

SpectralMeasure SpectralMeasure::atomic(int d, std::vector<SpectralAtom> atoms) {
  check_dim(d);
  if (atoms.empty()) throw std::invalid_argument("atomic measure needs at least one atom");
  for (auto& atom : atoms) {
    validate_atom(atom, d);
    atom.phi = std::fmod(atom.phi, kTwoPi);
    if (atom.phi < 0.0) atom.phi += kTwoPi;
  }
  SpectralMeasure m(d, Mode::atomic);
  m.atoms_ = std::move(atoms);
  return m;
}

SpectralMeasure SpectralMeasure::empty(int d) {
  check_dim(d);
  return SpectralMeasure(d, Mode::atomic);
}

SpectralMeasure SpectralMeasure::bessel(int d, double alpha) {
  check_dim(d);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("bessel family needs alpha in (0, 1]");
  }
  SpectralMeasure m(d, Mode::bessel);
  m.alpha_ = alpha;
  return m;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double l1_norm_negative(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    if (x < 0.0) s -= x;
  }
  return s;
}

double phase_offset(const SpectralAtom& atom) {
  const double base = atom.phi / kTwoPi;
  return base + std::ceil(l1_norm_negative(atom.xi) - base);
}

double eval_target(const SpectralMeasure& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.dim()) {
    throw std::invalid_argument("eval_target: point has wrong dimension");
  }
  if (m.mode() == SpectralMeasure::Mode::bessel) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return eval_radial(BesselTarget{m.alpha(), m.dim()}, std::sqrt(r2));
  }
  double sum = 0.0;
  for (const auto& atom : m.atoms()) {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += atom.xi[i] * x[i];
    sum += atom.a * std::cos(kTwoPi * dot + atom.phi);
  }
  return sum;
}

BarronNorm barron_norm(const SpectralMeasure& m, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("barron_norm: s must be nonnegative");
  if (m.mode() == SpectralMeasure::Mode::bessel) {
    const BesselTarget t{m.alpha(), m.dim()};
    if (s >= m.alpha()) {
      throw DivergentNorm("bessel potential with alpha = " + std::to_string(m.alpha()) +
                          " has infinite B^s norm for s = " + std::to_string(s));
    }
    return BarronNorm{bessel_barron_norm(t, s, BarronWeight::seminorm),
                      bessel_barron_norm(t, s, BarronWeight::full)};
  }
  BarronNorm out;
  for (const auto& atom : m.atoms()) {
    const double n1 = l1_norm(atom.xi);
    out.seminorm += atom.a * (n1 == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(n1, s));
    out.full_norm += atom.a * std::pow(1.0 + n1, s);
  }
  return out;
}

std::pair<SpectralMeasure, SpectralMeasure> frequency_split(const SpectralMeasure& m, double R) {
  require_atomic(m, "frequency_split");
  if (!(R > 0.0)) throw std::invalid_argument("frequency_split: R must be positive");
  SpectralMeasure low = SpectralMeasure::empty(m.dim());
  SpectralMeasure high = SpectralMeasure::empty(m.dim());
  std::vector<SpectralAtom> lo_atoms, hi_atoms;
  for (const auto& atom : m.atoms()) {
    (l1_norm(atom.xi) < R ? lo_atoms : hi_atoms).push_back(atom);
  }
  if (!lo_atoms.empty()) low = SpectralMeasure::atomic(m.dim(), std::move(lo_atoms));
  if (!hi_atoms.empty()) high = SpectralMeasure::atomic(m.dim(), std::move(hi_atoms));
  return {std::move(low), std::move(high)};
}

double normalizer_Q(const SpectralMeasure& m, double s) {
  require_atomic(m, "normalizer_Q");
  double q = 0.0;
  for (const auto& atom : m.atoms()) q += atom.a * std::pow(1.0 + l1_norm(atom.xi), -s);
  return q;
}

double amplitude_sum(const SpectralMeasure& m) {
  require_atomic(m, "amplitude_sum");
  double sum = 0.0;
  for (const auto& atom : m.atoms()) sum += atom.a;
  return sum;
}

double target_lipschitz(const SpectralMeasure& m) {
  require_atomic(m, "target_lipschitz");
  double lip = 0.0;
  for (const auto& atom : m.atoms()) lip += kTwoPi * atom.a * l1_norm(atom.xi);
  return lip;
}

SnnSample sample_snn(const SpectralMeasure& m, double s, Rng& rng) {
  if (!(s > 0.0 && s <= 0.5)) throw std::invalid_argument("sample_snn: s must lie in (0, 1/2]");
  const auto cum = xi_cumulative(m, s, "sample_snn");
  SnnSample out;
  out.atom = rng.categorical(cum);
  out.xi = m.atoms()[out.atom].xi;
  out.level = rng.geometric(std::pow(2.0, -(1.0 + s)));
  return out;
}

double dnn_radius_from_uniform(double u) {
  return std::acos(1.0 - 2.0 * u) / std::numbers::pi;
}

DnnSample sample_dnn(const SpectralMeasure& m, double s, Rng& rng) {
  if (!(s > 0.0 && s <= 0.5)) throw std::invalid_argument("sample_dnn: s must lie in (0, 1/2]");
  const auto cum = xi_cumulative(m, s, "sample_dnn");
  DnnSample out;
  out.atom = rng.categorical(cum);
  out.xi = m.atoms()[out.atom].xi;
  out.r = dnn_radius_from_uniform(rng.uniform_open());
  return out;
}

double uniform_split_threshold(int N, int d, int L) {
  if (N < 1 || d < 1 || L < 1) throw std::invalid_argument("uniform_split_threshold: bad arguments");
  return std::pow(static_cast<double>(N), L) *
         std::pow(1.0 + d * L * std::log(static_cast<double>(N)), -L);
}

SpectralMeasure parse_target(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("target file: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("d")) throw ParseError("target file: missing field \"d\"");
    const int d = doc.at("d").get<int>();
    if (doc.contains("family")) {
      const auto family = doc.at("family").get<std::string>();
      if (family != "bessel") {
        throw UnsupportedTarget("target file: unsupported continuous family \"" + family + "\"");
      }
      if (!doc.contains("alpha")) throw ParseError("target file: bessel family needs \"alpha\"");
      return SpectralMeasure::bessel(d, doc.at("alpha").get<double>());
    }
    if (!doc.contains("atoms")) throw ParseError("target file: missing field \"atoms\"");
    std::vector<SpectralAtom> atoms;
    for (const auto& item : doc.at("atoms")) {
      SpectralAtom atom;
      atom.xi = item.at("xi").get<std::vector<double>>();
      atom.a = item.at("a").get<double>();
      atom.phi = item.value("phi", 0.0);
      atoms.push_back(std::move(atom));
    }
    return SpectralMeasure::atomic(d, std::move(atoms));
  } catch (const json::exception& e) {
    throw ParseError(std::string("target file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("target file: ") + e.what());
  }
}

SpectralMeasure load_target(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open target file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_target(buf.str());
}

std::string target_to_json(const SpectralMeasure& m) {
  nlohmann::json doc;
  doc["d"] = m.dim();
  if (m.mode() == SpectralMeasure::Mode::bessel) {
    doc["family"] = "bessel";
    doc["alpha"] = m.alpha();
  } else {
    doc["atoms"] = nlohmann::json::array();
    for (const auto& atom : m.atoms()) {
      doc["atoms"].push_back({{"xi", atom.xi}, {"a", atom.a}, {"phi", atom.phi}});
    }
  }
  return doc.dump(2);
}

}  // namespace barron
