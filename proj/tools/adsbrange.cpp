// Command-line driver for the Monte Carlo experiments.
//
//   adsbrange sweep    outage vs SNR          -> sweep.csv, trials.jsonl
//   adsbrange track    range tracking         -> track.csv
//   adsbrange msens    outage vs maximum delay -> msens.csv, trials.jsonl
//   adsbrange selftest quick internal consistency checks
//
// Settings come from (lowest to highest precedence) a preset scenario, the
// --config file, ADSBRANGE_* environment variables, then explicit flags.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "adsbrange/channel.hpp"
#include "adsbrange/config.hpp"
#include "adsbrange/errors.hpp"
#include "adsbrange/gm_model.hpp"
#include "adsbrange/harness.hpp"
#include "adsbrange/observation_io.hpp"
#include "adsbrange/pipeline.hpp"
#include "adsbrange/reorder.hpp"
#include "adsbrange/rng.hpp"

namespace fs = std::filesystem;
using namespace adsbrange;

namespace {

constexpr int kExitFailureRate = 2;

struct Options {
  std::optional<std::string> config;
  int preset = 2;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<int> threads;
  std::optional<int> trials;
  std::optional<double> gamma;
  std::optional<std::string> dump_window;
  bool quiet = false;
};

Scenario resolve(const Options& o) {
  nlohmann::json tree = o.config ? scenario_to_json(load_scenario(*o.config)) : scenario_to_json(preset_scenario(o.preset));
  apply_overrides(tree, environment_overrides());
  Scenario s = scenario_from_json(tree);
  if (o.seed) s.seed = *o.seed;
  if (o.threads) s.threads = *o.threads;
  if (o.trials) s.trials = *o.trials;
  s.validate();
  return s;
}

std::ofstream open_out(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  const fs::path p = fs::path(o.out) / name;
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void write_outputs(const Options& o, const SweepResult& r, const std::string& report_name) {
  auto csv = open_out(o, report_name);
  write_report_csv(csv, r.report);
  auto jsonl = open_out(o, "trials.jsonl");
  for (const auto& rec : r.records) write_record_jsonl(jsonl, rec);
}

int check_failure_rate(const Scenario& s, const OutageReport& r) {
  const double rate = r.failure_rate();
  if (rate > s.failure_ceiling) {
    std::fprintf(stderr, "estimation failure rate %.4f exceeds ceiling %.4f\n", rate, s.failure_ceiling);
    return kExitFailureRate;
  }
  return 0;
}

void print_rows(const OutageReport& r) {
  for (const auto& row : r.rows) {
    std::printf("%s=%-6g %-5s alpha=%-5g 1-Pout=%.4f +- %.4f\n", row.axis.c_str(), row.x, row.metric.c_str(),
                row.alpha, row.value, row.stderr_value);
  }
}

void dump_first_window(const Scenario& s, const Options& o) {
  if (!o.dump_window) return;
  std::mt19937_64 rng(derive_seed(s.seed, {0xd0c5ULL}));
  std::uniform_real_distribution<double> ph(0.0, kTwoPi);
  std::uniform_int_distribution<int> dl(0, s.M);
  std::vector<DroneTruth> drones;
  std::vector<double> means;
  for (int k = 0; k < s.K; ++k) {
    const auto& b = s.ranges[static_cast<std::size_t>(k)];
    DroneTruth d{s.powers[static_cast<std::size_t>(k)], std::uniform_real_distribution<double>(b.lo, b.hi)(rng), {}, dl(rng)};
    for (int l = 0; l < s.num_antennas; ++l) d.theta.push_back(ph(rng));
    drones.push_back(d);
    means.push_back(b.mean());
  }
  const double gamma = o.gamma.value_or(s.gamma_db.empty() ? 20.0 : s.gamma_db.back());
  const double sigma2 = s.noiseless ? 0.0 : snr_to_sigma2(gamma, s.powers, means, s.lambda_c);
  const auto syn = synthesize(drones, NoiseParams{sigma2, rng()}, s.lambda_c, s.M, s.num_antennas, rng());
  const fs::path target(*o.dump_window);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_window(target, syn.window);
}

int cmd_sweep(const Options& o) {
  Scenario s = resolve(o);
  if (o.gamma) s.gamma_db = {*o.gamma};
  dump_first_window(s, o);
  const auto r = run_sweep(s);
  write_outputs(o, r, "sweep.csv");
  if (!o.quiet) print_rows(r.report);
  return check_failure_rate(s, r.report);
}

int cmd_msens(const Options& o) {
  const Scenario s = resolve(o);
  const auto r = run_m_sensitivity(s, s.m_list, o.gamma.value_or(20.0));
  write_outputs(o, r, "msens.csv");
  if (!o.quiet) print_rows(r.report);
  return check_failure_rate(s, r.report);
}

int cmd_track(const Options& o) {
  Scenario s = resolve(o);
  if (o.gamma) s.track_gamma_db = *o.gamma;
  const auto trace = run_tracking(s);
  auto csv = open_out(o, "track.csv");
  write_tracking_csv(csv, trace);
  std::size_t failed = 0;
  std::vector<double> sq(static_cast<std::size_t>(s.K), 0.0);
  for (const auto& p : trace) {
    for (std::size_t k = 0; k < p.range.size(); ++k) {
      if (!std::isfinite(p.range_hat[k])) {
        ++failed;
        continue;
      }
      sq[k] += (p.range_hat[k] - p.range[k]) * (p.range_hat[k] - p.range[k]);
    }
  }
  if (!o.quiet) {
    for (std::size_t k = 0; k < sq.size(); ++k) {
      std::printf("drone %zu rms error %.2f m\n", k + 1, std::sqrt(sq[k] / static_cast<double>(trace.size())));
    }
  }
  OutageReport r;
  r.trials = trace.size() * static_cast<std::size_t>(s.K);
  r.failures = failed;
  return check_failure_rate(s, r);
}

// Small end-to-end checks that need no reference data.
int cmd_selftest(const Options& o) {
  int bad = 0;
  auto check = [&](bool ok, const char* what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what);
    if (!ok) ++bad;
  };
  check(std::abs(bernoulli_p(20).p - 144.0 / 260.0) < 1e-15, "bernoulli parameter");
  check(mixture_weights(0.3, 3).sum() > 1 - 1e-12, "mixture weights sum to one");

  std::mt19937_64 rng(o.seed.value_or(1));
  std::uniform_real_distribution<double> ph(0.0, kTwoPi);
  ComplexVector h(3);
  h << std::polar(1.0, ph(rng)), std::polar(0.6, ph(rng)), std::polar(0.3, ph(rng));
  ComplexVector modes = mode_vector(h);
  std::shuffle(modes.data(), modes.data() + modes.size(), rng);
  check((reorder(modes, 3, ReorderMethod::ls_constrained).h - h).norm() < 1e-12, "reorder of exact modes");

  std::vector<DroneTruth> drones{{1.0, 900.0, {ph(rng), ph(rng)}, 3}, {1.0, 2300.0, {ph(rng), ph(rng)}, 12}};
  const auto syn = synthesize(drones, NoiseParams{}, kAdsbWavelength, 20, 2, rng());
  EstimatorConfig cfg;
  cfg.powers = {1.0, 1.0};
  const auto est = estimate_window(syn.window, cfg);
  check(!est.failed && std::abs(est.range[0] / 900.0 - 1) < 1e-6 && std::abs(est.range[1] / 2300.0 - 1) < 1e-6,
        "noiseless two-drone ranges");

  const auto back = decode_window(encode_window(syn.window));
  check((back.Y.array() == syn.window.Y.array()).all(), "window dump round trip");
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint range and phase-offset estimation from collided ADS-B packets"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "scenario JSON file");
    sub->add_option("--scenario", o.preset, "preset scenario when no config is given (1: K=3, 2: K=2, 3: K=1)")
        ->check(CLI::Range(1, 3));
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--trials", o.trials, "windows per point")->check(CLI::PositiveNumber);
    sub->add_option("--gamma", o.gamma, "SNR in dB (single point)");
    sub->add_flag("--quiet", o.quiet, "no summary on stdout");
  };

  auto* sweep = app.add_subcommand("sweep", "outage probability versus SNR");
  add_common(sweep);
  sweep->add_option("--dump-window", o.dump_window, "also write one synthesized window in binary form");
  auto* track = app.add_subcommand("track", "range tracking along reference trajectories");
  add_common(track);
  auto* msens = app.add_subcommand("msens", "outage probability versus maximum delay");
  add_common(msens);
  auto* selftest = app.add_subcommand("selftest", "internal consistency checks");
  selftest->add_option("--seed", o.seed, "seed for the random draws");

  CLI11_PARSE(app, argc, argv);
  try {
    if (sweep->parsed()) return cmd_sweep(o);
    if (track->parsed()) return cmd_track(o);
    if (msens->parsed()) return cmd_msens(o);
    if (selftest->parsed()) return cmd_selftest(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
