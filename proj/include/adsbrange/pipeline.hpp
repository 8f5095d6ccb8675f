#pragma once

// One observation window in, per-drone range and per-antenna phase out:
// EM on the window, zero-mode removal and reordering at every antenna,
// magnitude combining across antennas, then path-loss inversion.

#include <vector>

#include "adsbrange/channel.hpp"
#include "adsbrange/em.hpp"
#include "adsbrange/extract.hpp"
#include "adsbrange/reorder.hpp"

namespace adsbrange {

struct EstimatorConfig {
  std::vector<double> powers;  // known transmit powers, one per drone
  double sigma2 = 0.0;         // known noise variance; 0 selects a tiny floor
  EmConfig em;
  ReorderMethod reorder = ReorderMethod::ls_constrained;
  OutlierFilter filter = OutlierFilter::mad(3.0);
};

struct WindowEstimate {
  std::vector<double> range;  // K entries; NaN where estimation failed
  RealMatrix phase;           // N_r x K, wrapped to [0, 2pi); NaN where failed
  ComplexMatrix singletons;   // N_r x K reordered singleton modes
  EmResult em;
  bool failed = false;
};

/// EM noise variance used for `sigma2` (adds a floor relative to the window
/// power so noiseless windows remain well posed).
double effective_sigma2(const ObservationWindow& window, double sigma2);

WindowEstimate estimate_window(const ObservationWindow& window, const EstimatorConfig& config);

}  // namespace adsbrange
