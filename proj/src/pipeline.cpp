#include "adsbrange/pipeline.hpp"

#include <cmath>
#include <limits>

#include "adsbrange/errors.hpp"
#include "adsbrange/gm_model.hpp"

namespace adsbrange {

double effective_sigma2(const ObservationWindow& window, double sigma2) {
  const double power = window.Y.size() > 0 ? window.Y.squaredNorm() / static_cast<double>(window.Y.size()) : 0.0;
  const double floor = power > 0.0 ? 1e-10 * power : std::numeric_limits<double>::min();
  return std::max(sigma2, floor);
}

WindowEstimate estimate_window(const ObservationWindow& window, const EstimatorConfig& config) {
  const int K = window.K;
  const int antennas = window.num_antennas();
  if (K < 1) throw ConfigurationError("window must declare K >= 1");
  if (static_cast<int>(config.powers.size()) != K) {
    throw ConfigurationError("one transmit power per drone is required");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();

  WindowEstimate out;
  out.range.assign(static_cast<std::size_t>(K), nan);
  out.phase = RealMatrix::Constant(antennas, K, nan);
  out.singletons = ComplexMatrix::Zero(antennas, K);

  const RealVector weights = mixture_weights(bernoulli_p(window.M).p, K);
  out.em = run_em(window.Y, weights, effective_sigma2(window, config.sigma2), config.em);
  if (out.em.failed) {
    out.failed = true;
    return out;
  }

  for (int l = 0; l < antennas; ++l) {
    const ComplexVector eta = out.em.eta.row(l).transpose();
    const ReorderResult r = reorder(eta, K, config.reorder);
    out.singletons.row(l) = r.h.transpose();
    for (int k = 0; k < K; ++k) {
      if (auto theta = estimate_phase(r.h(k))) out.phase(l, k) = *theta;
    }
  }

  for (int k = 0; k < K; ++k) {
    std::vector<Complex> per_antenna(out.singletons.col(k).data(), out.singletons.col(k).data() + antennas);
    const double mag = combine_magnitudes(std::span<const Complex>(per_antenna), config.filter);
    if (auto r = range_from_magnitude(mag, config.powers[static_cast<std::size_t>(k)], window.lambda_c)) {
      out.range[static_cast<std::size_t>(k)] = *r;
    } else {
      out.failed = true;
    }
  }
  return out;
}

}  // namespace adsbrange
