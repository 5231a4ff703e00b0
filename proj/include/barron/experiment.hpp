#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barron/lowerbound.hpp"
#include "barron/metrics.hpp"
#include "barron/netcore.hpp"
#include "barron/rng.hpp"
#include "barron/spectral.hpp"

namespace barron {

enum class NetKind { shallow, deep };

struct SweepSpec {
  explicit SweepSpec(SpectralMeasure t) : target(std::move(t)) {}

  SpectralMeasure target;
  NetKind kind = NetKind::deep;
  double s = 0.5;
  int L = 1;
  std::vector<int> Ns;
  std::vector<double> ps{2.0};  // kInfinity allowed
  std::uint64_t seed = 0;
  int attempts = 8;
  int grid_resolution = 256;     // finite-p error grids (d <= 3)
  int linf_resolution = 1024;    // certified sup-norm grid
  int selection_points = 4096;   // Monte Carlo points for best-of-K selection
  std::size_t mc_points = 100000;  // finite-p errors when d > 3
};

struct SweepRow {
  int N = 0;
  int m = 0;
  ErrorEstimate error;
  std::vector<int> widths;
};

struct SweepFit {
  double p = 2.0;
  RateFit fit;
  std::size_t points = 0;
  std::string status;  // ok | excluded_smallest | saturated | insufficient
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (N, p)
  std::vector<SweepFit> fits;
  std::string hash;
  std::string csv;
  const SweepFit& fit_for(double p) const;
};

/// Sample count that keeps the expected (shallow) or worst-case (deep) width within N.
int samples_for_budget(const SweepSpec& spec, int N);

std::string config_hash(const SweepSpec& spec);
SweepResult run_sweep(const SweepSpec& spec);

/// Renders a double the same way everywhere ("%.17g", "inf").
std::string format_number(double v);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  bool passed() const;
  std::string to_json() const;
};

/// Suites: multiscale, composition, integral, khintchine, bessel.
VerifyReport run_verify(const std::string& suite);
const std::vector<std::string>& verify_suites();

/// pi^2 int_0^1 sin(pi r) gamma_{,n}(t, r) dr by Gauss-Legendre on `panels`
/// equal panels, refined at the kinks of the integrand in r.
double gamma_sine_integral(int n, double t, int panels = 10000);

struct LowerboundSpec {
  int L = 1;
  int N = 2;
  double s = 0.5;
  double eps = 0.1;
  int d = 2;
  int networks = 50;
  int lines = 20;
  std::uint64_t seed = 0;
  int l1_resolution = 256;
};

struct LowerboundResult {
  Witness witness;
  int stable_count_min = 0;
  int stable_floor = 0;
  double certified_lower = 0.0;
  double interval_lower_min = 0.0;  // smallest per-network interval bound
  double measured_l1 = 0.0;         // smallest measured L^1 error over the networks
  bool counts_ok = false;
  bool l1_ok = false;
  std::string csv;
  std::string to_json() const;
};

/// (L, N)-network with Gaussian hidden weights whose hyperplanes cross the
/// cube, and a least-squares readout fitted to `fit_target` at `fit_points`
/// random points.
ReluNetwork random_fitted_network(int L, int N, int d, const BatchFn& fit_target, Rng& rng,
                                  int fit_points = 2048);

BatchFn witness_fn(const Witness& w);

LowerboundResult run_lowerbound(const LowerboundSpec& spec);

}  // namespace barron
