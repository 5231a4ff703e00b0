#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "barron/rng.hpp"

namespace barron {

/// One Fourier atom: contributes a * cos(2 pi xi . x + phi) to the target.
struct SpectralAtom {
  std::vector<double> xi;  // frequency, cycles per unit
  double a = 0.0;          // amplitude |f^(xi)|
  double phi = 0.0;        // phase in [0, 2 pi)
};

/// Explicit Fourier representation of a target function on [0,1]^d.
///
/// Atomic mode stores a finite list of atoms. Continuous mode is limited to
/// registered families; the only one is the Bessel potential of order
/// alpha + d, whose spectrum is (1 + 4 pi^2 |xi|^2)^{-(alpha+d)/2}.
class SpectralMeasure {
 public:
  enum class Mode { atomic, bessel };

  /// Validates and stores atoms; requires at least one atom.
  static SpectralMeasure atomic(int d, std::vector<SpectralAtom> atoms);
  /// Atomic measure with no atoms (the zero function).
  static SpectralMeasure empty(int d);
  static SpectralMeasure bessel(int d, double alpha);

  int dim() const { return d_; }
  Mode mode() const { return mode_; }
  bool is_atomic() const { return mode_ == Mode::atomic; }
  bool empty() const { return is_atomic() && atoms_.empty(); }
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }
  double alpha() const { return alpha_; }

 private:
  SpectralMeasure(int d, Mode mode) : d_(d), mode_(mode) {}

  int d_ = 1;
  Mode mode_ = Mode::atomic;
  std::vector<SpectralAtom> atoms_;
  double alpha_ = 0.0;
};

struct BarronNorm {
  double seminorm = 0.0;   // sum a |xi|_1^s
  double full_norm = 0.0;  // sum a (1 + |xi|_1)^s
};

struct SnnSample {
  std::size_t atom = 0;
  std::vector<double> xi;
  std::uint64_t level = 0;
};

struct DnnSample {
  std::size_t atom = 0;
  std::vector<double> xi;
  double r = 0.5;  // in (0, 1)
};

double l1_norm(std::span<const double> v);
/// l1 norm of the negative part of v.
double l1_norm_negative(std::span<const double> v);

/// Integer-shifted phase theta (in cycles) with theta == phi / (2 pi) mod 1 and
/// 0 <= xi . x + theta < 1 + |xi|_1 for every x in [0,1]^d.
double phase_offset(const SpectralAtom& atom);

double eval_target(const SpectralMeasure& m, std::span<const double> x);

/// Norms of the stored (canonical) extension; an upper bound on the infimum
/// over extensions.
BarronNorm barron_norm(const SpectralMeasure& m, double s);

/// Atoms with |xi|_1 < R go to `first`, the rest to `second`.
std::pair<SpectralMeasure, SpectralMeasure> frequency_split(const SpectralMeasure& m, double R);

/// Q = sum a (1 + |xi|_1)^{-s}.
double normalizer_Q(const SpectralMeasure& m, double s);

/// Sum of amplitudes; bounds the target in sup norm.
double amplitude_sum(const SpectralMeasure& m);

/// Lipschitz constant of the atomic target w.r.t. the l-infinity norm on x.
double target_lipschitz(const SpectralMeasure& m);

SnnSample sample_snn(const SpectralMeasure& m, double s, Rng& rng);
DnnSample sample_dnn(const SpectralMeasure& m, double s, Rng& rng);

/// Inverse CDF of the density (pi/2) sin(pi r) on (0,1).
double dnn_radius_from_uniform(double u);

/// Threshold R = N^L (1 + d L ln N)^{-L} used by the uniform-norm split.
double uniform_split_threshold(int N, int d, int L);

SpectralMeasure parse_target(std::string_view json_text);
SpectralMeasure load_target(const std::string& path);
std::string target_to_json(const SpectralMeasure& m);

}  // namespace barron
