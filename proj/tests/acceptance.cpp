// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "barron/experiment.hpp"
#include "barron/parallel.hpp"
#include "barron/spectral.hpp"

using namespace barron;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SpectralMeasure five_atom() { return load_target(BARRON_DATA_DIR "/five_atom_d2.json"); }

const std::vector<int> kSweep{16, 32, 64, 128, 256, 512};
constexpr std::uint64_t kSeed = 1;

SweepSpec shallow_spec() {
  SweepSpec spec(five_atom());
  spec.kind = NetKind::shallow;
  spec.s = 0.5;
  spec.L = 1;
  spec.Ns = kSweep;
  spec.ps = {2.0};
  spec.seed = kSeed;
  return spec;
}

SweepSpec deep_spec(double s, int L, std::vector<double> ps) {
  SweepSpec spec(five_atom());
  spec.kind = NetKind::deep;
  spec.s = s;
  spec.L = L;
  spec.Ns = kSweep;
  spec.ps = std::move(ps);
  spec.seed = kSeed;
  return spec;
}

std::vector<LowerboundSpec> lowerbound_specs() {
  std::vector<LowerboundSpec> out;
  for (auto [L, N] : {std::pair{1, 2}, std::pair{1, 4}, std::pair{2, 2}}) {
    LowerboundSpec spec;
    spec.L = L;
    spec.N = N;
    spec.s = 0.5 / L;
    spec.eps = 0.1;
    spec.networks = 50;
    spec.lines = 20;
    spec.seed = kSeed;
    out.push_back(spec);
  }
  return out;
}

Outcome verify_within(const std::string& suite, double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = run_verify(suite);
  const double t = seconds_since(t0);
  std::string failed;
  for (const auto& c : rep.checks) {
    if (!c.passed) failed += " " + c.name;
  }
  Outcome o;
  o.pass = rep.passed() && t < budget_s;
  o.detail = std::to_string(rep.checks.size()) + " checks" + (failed.empty() ? "" : ", failed:" + failed) +
             fmt(", %.2fs", t) + fmt(" (limit %.0fs)", budget_s);
  return o;
}

// CSV outputs of criteria 5-8, collected for the determinism check.
std::vector<std::string> g_csv;

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_sweep(shallow_spec());
  const double t = seconds_since(t0);
  g_csv.push_back(res.csv);
  const auto& f = res.fit_for(2.0);
  Outcome o;
  o.pass = f.status != "insufficient" && f.status != "saturated" && f.fit.slope <= -0.35 && t < 60.0;
  o.detail = "slope " + fmt("%.3f", f.fit.slope) + " <= -0.35 [" + f.status + "]" + fmt(", %.1fs", t);
  return o;
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  o.pass = true;
  for (auto [s, L] : {std::pair{0.5, 1}, std::pair{0.25, 2}}) {
    const auto res = run_sweep(deep_spec(s, L, {2.0, 4.0}));
    g_csv.push_back(res.csv);
    for (double p : {2.0, 4.0}) {
      const auto& f = res.fit_for(p);
      const double limit = -s * L + 0.15;
      const bool ok = f.status != "insufficient" && f.status != "saturated" && f.fit.slope <= limit;
      o.pass = o.pass && ok;
      o.detail += fmt("(s=%.2f,", s) + "L=" + std::to_string(L) + fmt(",p=%.0f) ", p) +
                  fmt("%.3f", f.fit.slope) + fmt("<=%.2f; ", limit);
    }
  }
  const double t = seconds_since(t0);
  o.pass = o.pass && t < 180.0;
  o.detail += fmt("%.1fs", t);
  return o;
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_sweep(deep_spec(0.5, 1, {kInfinity}));
  const double t = seconds_since(t0);
  g_csv.push_back(res.csv);
  const auto& f = res.fit_for(kInfinity);
  bool certified = true;
  for (const auto& r : res.rows) certified = certified && r.error.method == "grid+lipschitz";
  Outcome o;
  o.pass = certified && f.status != "insufficient" && f.status != "saturated" && f.fit.slope <= -0.30 &&
           t < 120.0;
  o.detail = "certified slope " + fmt("%.3f", f.fit.slope) + " <= -0.30 [" + f.status + "]" + fmt(", %.1fs", t);
  return o;
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  o.pass = true;
  for (const auto& spec : lowerbound_specs()) {
    const auto res = run_lowerbound(spec);
    g_csv.push_back(res.csv);
    o.pass = o.pass && res.counts_ok && res.l1_ok;
    o.detail += "(" + std::to_string(spec.L) + "," + std::to_string(spec.N) + ") stable " +
                std::to_string(res.stable_count_min) + ">=" + std::to_string(res.stable_floor) + ", L1 " +
                fmt("%.4f", res.measured_l1) + ">=" + fmt("%.4f", res.certified_lower) + "; ";
  }
  const double t = seconds_since(t0);
  o.pass = o.pass && t < 120.0;
  o.detail += fmt("%.1fs", t);
  return o;
}

Outcome criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t before = thread_count();
  set_thread_count(before == 1 ? 3 : 1);
  std::vector<std::string> again;
  again.push_back(run_sweep(shallow_spec()).csv);
  for (auto [s, L] : {std::pair{0.5, 1}, std::pair{0.25, 2}}) again.push_back(run_sweep(deep_spec(s, L, {2.0, 4.0})).csv);
  again.push_back(run_sweep(deep_spec(0.5, 1, {kInfinity})).csv);
  for (const auto& spec : lowerbound_specs()) again.push_back(run_lowerbound(spec).csv);
  set_thread_count(before);
  Outcome o;
  std::size_t same = 0;
  for (std::size_t i = 0; i < again.size() && i < g_csv.size(); ++i) same += again[i] == g_csv[i];
  o.pass = g_csv.size() == again.size() && same == again.size();
  o.detail = std::to_string(same) + "/" + std::to_string(again.size()) +
             " CSV outputs byte-identical with a different thread count" + fmt(", %.1fs", seconds_since(t0));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact composition", [] { return verify_within("composition", 1.0); }},
      {"integral representation", [] { return verify_within("integral", 1.0); }},
      {"multiscale expansion", [] { return verify_within("multiscale", 1.0); }},
      {"khintchine", [] { return verify_within("khintchine", 5.0); }},
      {"shallow rate", criterion5},
      {"deep rate", criterion6},
      {"sup-norm rate", criterion7},
      {"lower bound", criterion8},
      {"bessel", [] { return verify_within("bessel", 30.0); }},
      {"determinism", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s %2zu %-24s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
