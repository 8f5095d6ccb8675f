#pragma once

// Free-space channel, superposition of delayed packets and complex AWGN.

#include <cstdint>
#include <span>
#include <vector>

#include "adsbrange/types.hpp"
#include "adsbrange/waveform.hpp"

namespace adsbrange {

/// Ground truth for one transmitter. `theta` holds one phase per receive antenna.
struct DroneTruth {
  double power = 1.0;  // watts
  double range = 0.0;  // meters
  std::vector<double> theta;
  int delay = 0;
};

struct ChannelGain {
  double beta = 0.0;
  double theta = 0.0;
  Complex h() const { return std::polar(beta, theta); }
};

struct NoiseParams {
  double sigma2 = 0.0;  // variance per complex sample
  std::uint64_t seed = 0;
};

struct ObservationWindow {
  ComplexMatrix Y;  // N_r x (240 + M)
  double lambda_c = kAdsbWavelength;
  int K = 0;
  int M = 0;

  int num_antennas() const { return static_cast<int>(Y.rows()); }
  int num_samples() const { return static_cast<int>(Y.cols()); }
};

/// A synthesized window together with the gains that produced it.
struct Synthesis {
  ObservationWindow window;
  ComplexMatrix H;  // N_r x K, H(l, k) = beta_k exp(j theta_{l,k})
  std::vector<PacketChips> packets;
};

/// (lambda_c / (4 pi r))^2. Throws DomainError for non-positive inputs.
double path_loss(double range, double lambda_c);

/// Amplitude sqrt(P L) of a drone's received signal.
double amplitude(const DroneTruth& drone, double lambda_c);

/// Superimposes the given packets. Drones must be ordered by strictly
/// decreasing P*L (ConfigurationError otherwise); every drone needs
/// `num_antennas` phases and a delay in [0, M].
Synthesis synthesize(std::span<const DroneTruth> drones, std::span<const PayloadBits> payloads,
                     const NoiseParams& noise, double lambda_c, int M, int num_antennas);

/// Same as above with payloads drawn uniformly from `payload_seed`.
Synthesis synthesize(std::span<const DroneTruth> drones, const NoiseParams& noise, double lambda_c,
                     int M, int num_antennas, std::uint64_t payload_seed);

/// Noise variance giving average per-antenna SNR `gamma_db`, using the path
/// loss at each drone's mean range.
double snr_to_sigma2(double gamma_db, std::span<const double> powers,
                     std::span<const double> mean_ranges, double lambda_c);

}  // namespace adsbrange
