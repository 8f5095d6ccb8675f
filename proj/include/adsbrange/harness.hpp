#pragma once

// Monte Carlo driver: scenarios, SNR sweeps, outage metrics, range tracking
// and the maximum-delay sensitivity experiment.
//
// Every trial is reproducible from (scenario, trial index, master seed). The
// trial seed does not depend on the SNR point, so all SNR points (and all
// antenna counts or M values) of one sweep share ground truth and noise
// shape; only the noise scale changes.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "adsbrange/em.hpp"
#include "adsbrange/extract.hpp"
#include "adsbrange/reorder.hpp"
#include "adsbrange/types.hpp"

namespace adsbrange {

struct RangeBounds {
  double lo = 0.0;
  double hi = 0.0;
  double mean() const { return 0.5 * (lo + hi); }
};

struct Scenario {
  int version = 1;
  int K = 2;
  std::vector<RangeBounds> ranges;  // uniform range distribution per drone
  std::vector<double> powers;       // watts
  int M = 20;
  int num_antennas = 5;
  double lambda_c = kAdsbWavelength;
  std::vector<double> gamma_db;
  int trials = 500;
  EmConfig em;
  ReorderMethod reorder = ReorderMethod::ls_constrained;
  OutlierFilter filter = OutlierFilter::mad(3.0);
  std::vector<double> alpha_r{0.05, 0.1, 0.2};
  std::vector<double> alpha_theta{0.05, 0.1, 0.2};
  std::vector<int> m_list{10, 20, 40};
  std::uint64_t seed = 1;
  int threads = 1;
  double failure_ceiling = 1.0;  // CLI exits with 2 above this failure rate
  bool noiseless = false;        // ignore gamma_db and synthesize with sigma2 = 0
  int track_packets = 100;
  double track_gamma_db = 20.0;

  /// Throws ConfigurationError on inconsistent fields.
  void validate() const;
};

/// 1: K=3, 2: K=2, 3: K=1, with the simulation defaults used throughout.
Scenario preset_scenario(int id);

// Phase truths closer to zero than this are left out of the phase outage.
inline constexpr double kPhaseExclusion = 1e-3;

struct TrialRecord {
  double gamma_db = 0.0;
  int M = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<double> range;      // K
  std::vector<int> delay;         // K
  RealMatrix theta;               // N_r x K
  std::vector<double> range_hat;  // K, NaN on failure
  RealMatrix theta_hat;           // N_r x K, NaN on failure
  int em_iterations = 0;
  int restarts_ok = 0;
  double loglik = 0.0;
  bool failed = false;
};

struct OutageRow {
  std::string axis;    // "gamma_db" or "M"
  double x = 0.0;
  std::string metric;  // "range" or "phase"
  double alpha = 0.0;
  double value = 0.0;  // 1 - P_out
  double stderr_value = 0.0;
  std::size_t events = 0;
  std::size_t trials = 0;
  // Phase rows only: the same metric with circular phase distance.
  double value_circular = 0.0;
  double stderr_circular = 0.0;
};

struct OutageReport {
  std::vector<OutageRow> rows;
  std::size_t trials = 0;    // windows evaluated across all points
  std::size_t failures = 0;  // windows with an estimation failure

  double failure_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
  }
};

struct SweepResult {
  OutageReport report;
  std::vector<TrialRecord> records;  // ordered by (point, trial)
};

/// Runs one window of `scenario` at the given SNR.
TrialRecord run_trial(const Scenario& scenario, double gamma_db, std::size_t trial);

/// Outage rows for one point (all alpha_r and alpha_theta thresholds).
std::vector<OutageRow> summarize(const std::vector<TrialRecord>& records, const Scenario& scenario,
                                 const std::string& axis, double x);

/// All gamma_db points of the scenario.
SweepResult run_sweep(const Scenario& scenario);

/// Fixed SNR, one point per M.
SweepResult run_m_sensitivity(const Scenario& scenario, const std::vector<int>& m_list,
                              double gamma_db);

/// Range of drone k (1-based) for packet n of the tracking experiment.
double tracking_range(int k, int n);

struct TrackPoint {
  int n = 0;
  std::vector<double> range;
  std::vector<double> range_hat;
};

/// Packets n = 1..track_packets along the three reference trajectories
/// (first K of them), at track_gamma_db.
std::vector<TrackPoint> run_tracking(const Scenario& scenario);

/// Runs fn(i) for i in [0, count) on `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// Report output.
void write_report_csv(std::ostream& os, const OutageReport& report);
void write_record_jsonl(std::ostream& os, const TrialRecord& record);
void write_tracking_csv(std::ostream& os, const std::vector<TrackPoint>& trace);

}  // namespace adsbrange
