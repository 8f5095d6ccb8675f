#include "adsbrange/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "adsbrange/channel.hpp"
#include "adsbrange/errors.hpp"
#include "adsbrange/pipeline.hpp"
#include "adsbrange/rng.hpp"

namespace adsbrange {
namespace {

// Stream tags for per-trial seed derivation.
enum : std::uint64_t { kRangeStream = 1, kDelayStream, kPhaseStream, kPayloadStream, kNoiseStream, kEmStream };

std::string fmt_num(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double binomial_stderr(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

struct Window {
  std::vector<DroneTruth> drones;
  Synthesis synthesis;
};

Window draw_window(const Scenario& s, std::uint64_t trial_seed, double sigma2,
                   const std::vector<double>* fixed_ranges) {
  Window w;
  std::mt19937_64 range_rng(derive_seed(trial_seed, {kRangeStream}));
  std::mt19937_64 delay_rng(derive_seed(trial_seed, {kDelayStream}));
  std::uniform_int_distribution<int> delay(0, s.M);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  for (int k = 0; k < s.K; ++k) {
    DroneTruth d;
    d.power = s.powers[static_cast<std::size_t>(k)];
    if (fixed_ranges) {
      d.range = (*fixed_ranges)[static_cast<std::size_t>(k)];
    } else {
      const RangeBounds& b = s.ranges[static_cast<std::size_t>(k)];
      d.range = std::uniform_real_distribution<double>(b.lo, b.hi)(range_rng);
    }
    d.delay = delay(delay_rng);
    // Antenna l of drone k draws the same phase whatever the antenna count.
    std::mt19937_64 phase_rng(derive_seed(trial_seed, {kPhaseStream, static_cast<std::uint64_t>(k)}));
    for (int l = 0; l < s.num_antennas; ++l) d.theta.push_back(phase(phase_rng));
    w.drones.push_back(std::move(d));
  }
  NoiseParams noise{sigma2, derive_seed(trial_seed, {kNoiseStream})};
  w.synthesis = synthesize(w.drones, noise, s.lambda_c, s.M, s.num_antennas,
                           derive_seed(trial_seed, {kPayloadStream}));
  return w;
}

std::vector<double> mean_ranges(const Scenario& s) {
  std::vector<double> out;
  for (const auto& b : s.ranges) out.push_back(b.mean());
  return out;
}

TrialRecord estimate_trial(const Scenario& s, Window& w, double sigma2, std::uint64_t trial_seed) {
  EstimatorConfig est;
  est.powers = s.powers;
  est.sigma2 = sigma2;
  est.em = s.em;
  est.em.seed = derive_seed(trial_seed, {kEmStream});
  est.reorder = s.reorder;
  est.filter = s.filter;
  const WindowEstimate e = estimate_window(w.synthesis.window, est);

  TrialRecord rec;
  rec.M = s.M;
  rec.seed = trial_seed;
  rec.theta.resize(s.num_antennas, s.K);
  for (int k = 0; k < s.K; ++k) {
    const auto& d = w.drones[static_cast<std::size_t>(k)];
    rec.range.push_back(d.range);
    rec.delay.push_back(d.delay);
    for (int l = 0; l < s.num_antennas; ++l) rec.theta(l, k) = d.theta[static_cast<std::size_t>(l)];
  }
  rec.range_hat = e.range;
  rec.theta_hat = e.phase;
  rec.em_iterations = e.em.iterations;
  rec.restarts_ok = e.em.restarts_ok;
  rec.loglik = e.em.loglik;
  rec.failed = e.failed;
  return rec;
}

}  // namespace

void Scenario::validate() const {
  if (version != 1) throw ConfigurationError("unsupported scenario version " + std::to_string(version));
  if (K < 1) throw ConfigurationError("K must be >= 1");
  if (static_cast<int>(ranges.size()) != K) throw ConfigurationError("one range interval per drone is required");
  if (static_cast<int>(powers.size()) != K) throw ConfigurationError("one transmit power per drone is required");
  for (const auto& b : ranges) {
    if (!(b.lo > 0.0) || !(b.hi >= b.lo)) throw ConfigurationError("range bounds must satisfy 0 < lo <= hi");
  }
  for (double p : powers) {
    if (!(p > 0.0)) throw ConfigurationError("transmit powers must be positive");
  }
  // Identifiability needs strictly decreasing received power for every draw:
  // the weakest possible drone k must still beat the strongest drone k+1.
  for (int k = 0; k + 1 < K; ++k) {
    const auto& a = ranges[static_cast<std::size_t>(k)];
    const auto& b = ranges[static_cast<std::size_t>(k + 1)];
    if (!(a.mean() < b.mean())) throw ConfigurationError("mean ranges must increase with drone index");
    const double weakest = powers[static_cast<std::size_t>(k)] / (a.hi * a.hi);
    const double strongest_next = powers[static_cast<std::size_t>(k + 1)] / (b.lo * b.lo);
    if (!(weakest > strongest_next)) {
      throw ConfigurationError("range intervals allow drones " + std::to_string(k + 1) + " and " +
                               std::to_string(k + 2) + " to swap received-power order");
    }
  }
  if (M < 0) throw ConfigurationError("M must be non-negative");
  if (num_antennas < 1) throw ConfigurationError("num_antennas must be >= 1");
  if (!(lambda_c > 0.0)) throw ConfigurationError("lambda_c must be positive");
  if (trials < 1) throw ConfigurationError("trials must be >= 1");
  if (threads < 1) throw ConfigurationError("threads must be >= 1");
  if (track_packets < 1) throw ConfigurationError("tracking packets must be >= 1");
  for (int m : m_list) {
    if (m < 0) throw ConfigurationError("m_list entries must be non-negative");
  }
  for (double a : alpha_r) {
    if (!(a > 0.0)) throw ConfigurationError("alpha_r entries must be positive");
  }
  for (double a : alpha_theta) {
    if (!(a > 0.0)) throw ConfigurationError("alpha_theta entries must be positive");
  }
  switch (reorder) {
    case ReorderMethod::ls_constrained:
    case ReorderMethod::ls_unconstrained:
      if (K > 4) throw ConfigurationError("LS reordering supports K <= 4");
      break;
    default:
      if (K != 4) throw ConfigurationError("subset reordering methods require K = 4");
  }
  em.validate();
  if (em.init == InitMethod::provided) throw ConfigurationError("scenarios use k-means++ initialization");
}

Scenario preset_scenario(int id) {
  Scenario s;
  switch (id) {
    case 1:
      s.K = 3;
      s.ranges = {{500, 1000}, {1500, 2000}, {2500, 3000}};
      break;
    case 2:
      s.K = 2;
      s.ranges = {{500, 1500}, {2000, 3000}};
      break;
    case 3:
      s.K = 1;
      s.ranges = {{500, 3000}};
      break;
    default:
      throw ConfigurationError("preset scenarios are 1, 2 and 3");
  }
  s.powers.assign(static_cast<std::size_t>(s.K), 1.0);
  s.gamma_db = {0, 5, 10, 15, 20, 25};
  return s;
}

TrialRecord run_trial(const Scenario& scenario, double gamma_db, std::size_t trial) {
  const std::uint64_t trial_seed = derive_seed(scenario.seed, {static_cast<std::uint64_t>(trial)});
  const auto means = mean_ranges(scenario);
  const double sigma2 =
      scenario.noiseless ? 0.0 : snr_to_sigma2(gamma_db, scenario.powers, means, scenario.lambda_c);
  Window w = draw_window(scenario, trial_seed, sigma2, nullptr);
  TrialRecord rec = estimate_trial(scenario, w, sigma2, trial_seed);
  rec.gamma_db = gamma_db;
  rec.trial = trial;
  return rec;
}

std::vector<OutageRow> summarize(const std::vector<TrialRecord>& records, const Scenario& scenario,
                                 const std::string& axis, double x) {
  std::vector<OutageRow> rows;
  const std::size_t trials = records.size();

  for (double alpha : scenario.alpha_r) {
    std::size_t events = 0, outages = 0;
    for (const auto& rec : records) {
      for (std::size_t k = 0; k < rec.range.size(); ++k) {
        ++events;
        const double est = rec.range_hat[k];
        if (!std::isfinite(est) || std::abs(est - rec.range[k]) / rec.range[k] > alpha) ++outages;
      }
    }
    OutageRow row;
    row.axis = axis;
    row.x = x;
    row.metric = "range";
    row.alpha = alpha;
    row.events = events;
    row.trials = trials;
    row.value = events == 0 ? 0.0 : 1.0 - static_cast<double>(outages) / static_cast<double>(events);
    row.stderr_value = binomial_stderr(row.value, trials);
    rows.push_back(row);
  }

  for (double alpha : scenario.alpha_theta) {
    std::size_t events = 0, raw_out = 0, circ_out = 0;
    for (const auto& rec : records) {
      for (Eigen::Index l = 0; l < rec.theta.rows(); ++l) {
        for (Eigen::Index k = 0; k < rec.theta.cols(); ++k) {
          const double truth = rec.theta(l, k);
          if (std::abs(truth) < kPhaseExclusion) continue;
          ++events;
          const double est = rec.theta_hat(l, k);
          if (!std::isfinite(est)) {
            ++raw_out;
            ++circ_out;
            continue;
          }
          const double raw = std::abs(est - truth);
          const double wrapped = std::fmod(raw, kTwoPi);
          const double circular = std::min(wrapped, kTwoPi - wrapped);
          if (raw / truth > alpha) ++raw_out;
          if (circular / truth > alpha) ++circ_out;
        }
      }
    }
    OutageRow row;
    row.axis = axis;
    row.x = x;
    row.metric = "phase";
    row.alpha = alpha;
    row.events = events;
    row.trials = trials;
    const double n = static_cast<double>(events);
    row.value = events == 0 ? 0.0 : 1.0 - static_cast<double>(raw_out) / n;
    row.value_circular = events == 0 ? 0.0 : 1.0 - static_cast<double>(circ_out) / n;
    row.stderr_value = binomial_stderr(row.value, trials);
    row.stderr_circular = binomial_stderr(row.value_circular, trials);
    rows.push_back(row);
  }
  return rows;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

SweepResult run_points(const Scenario& base, const std::string& axis, const std::vector<double>& xs,
                       const std::function<Scenario(double)>& configure,
                       const std::function<double(double)>& gamma_of) {
  base.validate();
  SweepResult result;
  const std::size_t trials = static_cast<std::size_t>(base.trials);
  result.records.resize(xs.size() * trials);

  std::vector<Scenario> per_point;
  for (double x : xs) {
    per_point.push_back(configure(x));
    per_point.back().validate();
  }

  parallel_for(result.records.size(), base.threads, [&](std::size_t i) {
    const std::size_t point = i / trials;
    const std::size_t trial = i % trials;
    result.records[i] = run_trial(per_point[point], gamma_of(xs[point]), trial);
  });

  for (std::size_t p = 0; p < xs.size(); ++p) {
    const std::vector<TrialRecord> slice(result.records.begin() + static_cast<std::ptrdiff_t>(p * trials),
                                         result.records.begin() + static_cast<std::ptrdiff_t>((p + 1) * trials));
    auto rows = summarize(slice, per_point[p], axis, xs[p]);
    result.report.rows.insert(result.report.rows.end(), rows.begin(), rows.end());
  }
  result.report.trials = result.records.size();
  for (const auto& r : result.records) result.report.failures += r.failed ? 1 : 0;
  return result;
}

}  // namespace

SweepResult run_sweep(const Scenario& scenario) {
  if (scenario.gamma_db.empty()) throw ConfigurationError("gamma_db list is empty");
  return run_points(
      scenario, "gamma_db", scenario.gamma_db, [&](double) { return scenario; },
      [](double g) { return g; });
}

SweepResult run_m_sensitivity(const Scenario& scenario, const std::vector<int>& m_list,
                              double gamma_db) {
  if (m_list.empty()) throw ConfigurationError("M list is empty");
  std::vector<double> xs(m_list.begin(), m_list.end());
  return run_points(
      scenario, "M", xs,
      [&](double m) {
        Scenario s = scenario;
        s.M = static_cast<int>(m);
        return s;
      },
      [gamma_db](double) { return gamma_db; });
}

double tracking_range(int k, int n) {
  const double t = static_cast<double>(n);
  switch (k) {
    case 1: return 750.0 + 250.0 * std::cos(0.1 * kPi * t);
    case 2: return 1750.0 + 250.0 * std::cos(0.05 * kPi * t + 2.0 * kPi / 4.0);
    case 3: return 2750.0 + 250.0 * std::cos(0.2 * kPi * t - kPi / 3.0);
    default: throw DomainError("tracking trajectories exist for drones 1..3");
  }
}

std::vector<TrackPoint> run_tracking(const Scenario& scenario) {
  if (scenario.K < 1 || scenario.K > 3) throw ConfigurationError("tracking supports K = 1..3");
  Scenario s = scenario;
  // Trajectory envelopes: 750 +- 250, 1750 +- 250, 2750 +- 250.
  s.ranges.clear();
  for (int k = 1; k <= s.K; ++k) {
    const double center = 750.0 + 1000.0 * (k - 1);
    s.ranges.push_back({center - 250.0, center + 250.0});
  }
  s.validate();
  const auto means = mean_ranges(s);
  const double sigma2 = s.noiseless ? 0.0 : snr_to_sigma2(s.track_gamma_db, s.powers, means, s.lambda_c);

  std::vector<TrackPoint> trace(static_cast<std::size_t>(s.track_packets));
  parallel_for(trace.size(), s.threads, [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    std::vector<double> ranges;
    for (int k = 1; k <= s.K; ++k) ranges.push_back(tracking_range(k, n));
    const std::uint64_t trial_seed = derive_seed(s.seed, {0x7ac4ULL, static_cast<std::uint64_t>(n)});
    Window w = draw_window(s, trial_seed, sigma2, &ranges);
    const TrialRecord rec = estimate_trial(s, w, sigma2, trial_seed);
    trace[i] = TrackPoint{n, rec.range, rec.range_hat};
  });
  return trace;
}

void write_report_csv(std::ostream& os, const OutageReport& report) {
  os << "axis,x,metric,alpha,one_minus_pout,stderr,events,trials,one_minus_pout_circular,stderr_circular\n";
  for (const auto& r : report.rows) {
    os << r.axis << ',' << fmt_num(r.x) << ',' << r.metric << ',' << fmt_num(r.alpha) << ','
       << fmt_num(r.value) << ',' << fmt_num(r.stderr_value) << ',' << r.events << ',' << r.trials << ',';
    if (r.metric == "phase") os << fmt_num(r.value_circular) << ',' << fmt_num(r.stderr_circular);
    else os << ',';
    os << '\n';
  }
}

void write_record_jsonl(std::ostream& os, const TrialRecord& rec) {
  auto matrix = [](const RealMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index l = 0; l < m.rows(); ++l) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(l, k));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json j;
  j["gamma_db"] = rec.gamma_db;
  j["M"] = rec.M;
  j["trial"] = rec.trial;
  j["seed"] = rec.seed;
  j["range"] = rec.range;
  j["delay"] = rec.delay;
  j["theta"] = matrix(rec.theta);
  j["range_hat"] = rec.range_hat;
  j["theta_hat"] = matrix(rec.theta_hat);
  j["em"] = {{"iterations", rec.em_iterations}, {"restarts_ok", rec.restarts_ok}, {"loglik", rec.loglik}};
  j["failed"] = rec.failed;
  os << j.dump() << '\n';
}

void write_tracking_csv(std::ostream& os, const std::vector<TrackPoint>& trace) {
  const std::size_t K = trace.empty() ? 0 : trace.front().range.size();
  os << 'n';
  for (std::size_t k = 1; k <= K; ++k) os << ",r" << k << ",r" << k << "_hat";
  os << '\n';
  for (const auto& p : trace) {
    os << p.n;
    for (std::size_t k = 0; k < K; ++k) os << ',' << fmt_num(p.range[k]) << ',' << fmt_num(p.range_hat[k]);
    os << '\n';
  }
}

}  // namespace adsbrange
