#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "barron/errors.hpp"
#include "barron/netcore.hpp"
#include "barron/rng.hpp"
#include "barron/spectral.hpp"

namespace barron {

struct BuildConfig {
  double s = 0.5;
  int L = 1;
  int m = 1;
  int attempts = 8;
  std::optional<int> width_budget;
  double p = 2.0;
  std::uint64_t seed = 0;
};

struct BuildReport {
  std::vector<int> widths;  // realised width per hidden layer
  std::size_t unit_count = 0;
  double unit_bound = 0.0;  // sum over samples of the per-sample unit bound
  double scale = 0.0;       // common output prefactor
  int attempt = 0;
  double estimated_error = std::numeric_limits<double>::quiet_NaN();
  int samples = 0;
  int zero_frequency_samples = 0;  // folded into the output constant
  int max_width() const;
};

std::string report_to_json(const BuildReport& r);
/// Reads the fields of BuildConfig from a JSON object; absent fields keep defaults.
BuildConfig parse_build_config(const std::string& json_text, BuildConfig base = {});

/// Thrown when every attempt exceeds the width budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, BuildReport best) : Error(what), best_(std::move(best)) {}
  const BuildReport& best() const { return best_; }

 private:
  BuildReport best_;
};

/// Heaviside network sum_i Q/((1-q) m) 2^{(1+s) l_i} (1+|xi_i|_1)^s sum_j alpha_{l_i,j}
/// chi_[0,1)(2^{l_i} u_i(x) - j), q = 2^{-(1+s)}, written with one Heaviside unit
/// per interior edge of the indicator staircase.
std::pair<ShallowNet, BuildReport> build_shallow_heaviside(const SpectralMeasure& m,
                                                           const BuildConfig& cfg, Rng& rng);

/// Tail bound delta(eps): |sigma(t) - H(t)| < eps for |t| > delta.
double sigmoid_tail_bound(Activation family, double eps);

/// Replaces H(w.x+b) by sigma(tau (w.x+b)) with a per-unit tau such that each
/// unit's L^p([0,1]^d) deviation is at most eps.
ShallowNet heaviside_to_sigmoidal(const ShallowNet& net, Activation family, double eps, double p);

/// n = ceil((1 + |xi|_1)^{1/L}) computed in integers.
int deep_base_frequency(double xi_l1, int L);
/// n_xi = 2^{L-1} n^L.
double deep_total_frequency(double xi_l1, int L);

/// Deep ReLU network (2 pi Q / m) sum_i (1+|xi_i|_1)^s gamma_{,n_i}(t_i(x), r_i),
/// each summand an L-layer block (beta_{,n} layers then gamma_{,n}).
std::pair<ReluNetwork, BuildReport> build_deep(const SpectralMeasure& m, const BuildConfig& cfg,
                                               Rng& rng);

/// Unit/width usage of a single deep block for frequency xi (max over layers).
int deep_block_width(double xi_l1, int L);

/// Upper bound on the expected Heaviside units of one shallow sample:
/// E[(2^l |xi|_1 + 1) 1{l >= 1}] under the sampler.
double shallow_expected_units(const SpectralMeasure& m, double s);

using NetVariant = std::variant<ReluNetwork, ShallowNet>;

/// Low part (|xi|_1 < R) built at s_eff = min(1/2, 1/(2L)), high part at cfg.s.
/// `deep` selects the ReLU builder; otherwise the Heaviside builder.
std::pair<NetVariant, BuildReport> build_split(const SpectralMeasure& m, const BuildConfig& cfg,
                                               Rng& rng, bool deep, double R = 1.0);

/// Runs attempts k = 0..K-1 with streams base.split(k); keeps the candidate
/// with the smallest estimate among those within the width budget (ties go to
/// the lower index).
template <class Net>
std::pair<Net, BuildReport> best_of_k(
    int K, std::optional<int> budget, const Rng& base,
    const std::function<std::pair<Net, BuildReport>(Rng&)>& builder,
    const std::function<double(const Net&)>& estimator) {
  if (K < 1) throw std::invalid_argument("best_of_k: K must be positive");
  std::optional<std::pair<Net, BuildReport>> best;
  std::optional<BuildReport> smallest_over;
  for (int k = 0; k < K; ++k) {
    Rng rng = base.split(static_cast<std::uint64_t>(k));
    auto cand = builder(rng);
    cand.second.attempt = k;
    if (budget && cand.second.max_width() > *budget) {
      if (!smallest_over || cand.second.max_width() < smallest_over->max_width()) {
        smallest_over = cand.second;
      }
      continue;
    }
    cand.second.estimated_error = estimator(cand.first);
    if (!best || cand.second.estimated_error < best->second.estimated_error) best = std::move(cand);
  }
  if (!best) {
    throw BudgetError("all " + std::to_string(K) + " attempts exceed the width budget " +
                          std::to_string(*budget),
                      *smallest_over);
  }
  return std::move(*best);
}

}  // namespace barron
