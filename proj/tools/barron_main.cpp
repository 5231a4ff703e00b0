// Experiment driver: rate sweeps, identity verification, lower-bound reports
// and network construction. Exit codes: 0 pass, 1 check failure, 2 usage.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "barron/build.hpp"
#include "barron/errors.hpp"
#include "barron/experiment.hpp"
#include "barron/parallel.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& text, const char* field) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("--") + field + ": not an integer: \"" + item + "\"");
    }
  }
  if (out.empty()) throw UsageError(std::string("--") + field + ": empty list");
  return out;
}

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "infinity") {
      out.push_back(barron::kInfinity);
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--p: not a number: \"" + item + "\"");
    }
  }
  if (out.empty()) throw UsageError("--p: empty list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

// Flags given on the command line win over the config file.
struct Options {
  std::string config;
  std::string target;
  std::string kind = "deep";
  double s = 0.5;
  int L = 1;
  int m = 16;
  std::string sweep;
  std::string p = "2";
  std::uint64_t seed = 0;
  int attempts = 8;
  std::string out;
  int N = 2;
  double eps = 0.1;
  int networks = 50;
  int lines = 20;
  std::size_t threads = 0;
};

void apply_config(Options& o, const CLI::App& cmd) {
  if (o.config.empty()) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(o.config));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  const auto unset = [&](const char* flag) { return cmd.count(std::string("--") + flag) == 0; };
  try {
    if (doc.contains("target") && unset("target")) o.target = doc["target"].get<std::string>();
    if (doc.contains("kind") && unset("kind")) o.kind = doc["kind"].get<std::string>();
    if (doc.contains("s") && unset("s")) o.s = doc["s"].get<double>();
    if (doc.contains("L") && unset("L")) o.L = doc["L"].get<int>();
    if (doc.contains("m") && unset("m")) o.m = doc["m"].get<int>();
    if (doc.contains("sweep") && unset("sweep")) {
      const auto& v = doc["sweep"];
      if (v.is_array()) {
        std::string joined;
        for (const auto& x : v) joined += (joined.empty() ? "" : ",") + std::to_string(x.get<int>());
        o.sweep = joined;
      } else {
        o.sweep = v.get<std::string>();
      }
    }
    if (doc.contains("p") && unset("p")) {
      const auto& v = doc["p"];
      std::string joined;
      const auto add = [&](const nlohmann::json& x) {
        joined += joined.empty() ? "" : ",";
        joined += x.is_string() ? x.get<std::string>() : barron::format_number(x.get<double>());
      };
      if (v.is_array()) {
        for (const auto& x : v) add(x);
      } else {
        add(v);
      }
      o.p = joined;
    }
    if (doc.contains("seed") && unset("seed")) o.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("attempts") && unset("attempts")) o.attempts = doc["attempts"].get<int>();
    if (doc.contains("out") && unset("out")) o.out = doc["out"].get<std::string>();
    if (doc.contains("N") && unset("N")) o.N = doc["N"].get<int>();
    if (doc.contains("eps") && unset("eps")) o.eps = doc["eps"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
}

barron::NetKind parse_kind(const std::string& k) {
  if (k == "deep") return barron::NetKind::deep;
  if (k == "shallow") return barron::NetKind::shallow;
  throw UsageError("--kind: expected shallow or deep, got \"" + k + "\"");
}

int cmd_sweep(const Options& o) {
  if (o.target.empty()) throw UsageError("--target: required");
  if (o.sweep.empty()) throw UsageError("--sweep: required");
  barron::SweepSpec spec(barron::load_target(o.target));
  spec.kind = parse_kind(o.kind);
  spec.s = o.s;
  spec.L = o.L;
  spec.Ns = parse_int_list(o.sweep, "sweep");
  for (std::size_t i = 1; i < spec.Ns.size(); ++i) {
    if (spec.Ns[i] <= spec.Ns[i - 1]) throw UsageError("--sweep: list must be strictly increasing");
  }
  spec.ps = parse_p_list(o.p);
  spec.seed = o.seed;
  spec.attempts = o.attempts;
  const auto res = barron::run_sweep(spec);
  write_output(o.out, res.csv);
  return 0;
}

int cmd_verify(const std::string& suite, const Options& o) {
  const auto& names = barron::verify_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw UsageError("unknown suite \"" + suite + "\"");
  }
  const auto rep = barron::run_verify(suite);
  write_output(o.out, rep.to_json());
  return rep.passed() ? 0 : kExitFail;
}

int cmd_lowerbound(const Options& o) {
  barron::LowerboundSpec spec;
  spec.L = o.L;
  spec.N = o.N;
  spec.s = o.s;
  spec.eps = o.eps;
  spec.networks = o.networks;
  spec.lines = o.lines;
  spec.seed = o.seed;
  const auto res = barron::run_lowerbound(spec);
  write_output(o.out, res.to_json());
  return res.counts_ok && res.l1_ok ? 0 : kExitFail;
}

int cmd_build(const Options& o) {
  if (o.target.empty()) throw UsageError("--target: required");
  const auto target = barron::load_target(o.target);
  barron::BuildConfig cfg;
  cfg.s = o.s;
  cfg.L = o.L;
  cfg.m = o.m;
  cfg.attempts = 1;
  cfg.seed = o.seed;
  barron::Rng rng(o.seed);
  std::string net_json, report;
  if (parse_kind(o.kind) == barron::NetKind::deep) {
    auto [net, rep] = barron::build_deep(target, cfg, rng);
    net_json = barron::serialize(net);
    report = barron::report_to_json(rep);
  } else {
    cfg.L = 1;
    auto [net, rep] = barron::build_shallow_heaviside(target, cfg, rng);
    net_json = barron::serialize(net);
    report = barron::report_to_json(rep);
  }
  write_output(o.out, net_json);
  if (!o.out.empty() && o.out != "-") write_output(o.out + ".report.json", report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive network approximation of spectral Barron targets"};
  app.require_subcommand(1);
  Options o;
  std::string suite;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "JSON file with the same field names as the flags");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--out", o.out, "Output path (default stdout)");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
  };

  auto* sweep = app.add_subcommand("sweep", "Rate sweep over width budgets; CSV output");
  common(sweep);
  sweep->add_option("--target", o.target, "Target definition file");
  sweep->add_option("--kind", o.kind, "shallow | deep");
  sweep->add_option("--s", o.s, "Smoothness index s");
  sweep->add_option("--L", o.L, "Depth");
  sweep->add_option("--sweep", o.sweep, "Width budgets N1,N2,...");
  sweep->add_option("--p", o.p, "Norms, e.g. 2,4,inf");
  sweep->add_option("--attempts", o.attempts, "Best-of-K attempts");

  auto* verify = app.add_subcommand("verify", "Exact-identity suites; JSON output");
  common(verify);
  verify->add_option("suite", suite, "multiscale | composition | integral | khintchine | bessel")
      ->required();

  auto* lower = app.add_subcommand("lowerbound", "Oscillation lower-bound report; JSON output");
  common(lower);
  lower->add_option("--L", o.L, "Depth");
  lower->add_option("--N", o.N, "Width");
  lower->add_option("--s", o.s, "Smoothness index s");
  lower->add_option("--eps", o.eps, "Slack epsilon");
  lower->add_option("--networks", o.networks, "Networks to test");
  lower->add_option("--lines", o.lines, "Lines per network");

  auto* build = app.add_subcommand("build", "Build one network; JSON output plus report sidecar");
  common(build);
  build->add_option("--target", o.target, "Target definition file");
  build->add_option("--kind", o.kind, "shallow | deep");
  build->add_option("--s", o.s, "Smoothness index s");
  build->add_option("--L", o.L, "Depth");
  build->add_option("--m", o.m, "Sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    apply_config(o, *active);
    if (o.threads > 0) barron::set_thread_count(o.threads);
    if (active == sweep) return cmd_sweep(o);
    if (active == verify) return cmd_verify(suite, o);
    if (active == lower) return cmd_lowerbound(o);
    return cmd_build(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const barron::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
