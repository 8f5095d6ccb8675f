#include "adsbrange/channel.hpp"

#include <cmath>
#include <random>
#include <string>

#include "adsbrange/errors.hpp"

namespace adsbrange {

double path_loss(double range, double lambda_c) {
  if (!(range > 0.0) || !(lambda_c > 0.0)) {
    throw DomainError("path_loss requires positive range and wavelength");
  }
  const double ratio = lambda_c / (4.0 * kPi * range);
  return ratio * ratio;
}

double amplitude(const DroneTruth& drone, double lambda_c) {
  if (!(drone.power > 0.0)) throw DomainError("transmit power must be positive");
  return std::sqrt(drone.power * path_loss(drone.range, lambda_c));
}

Synthesis synthesize(std::span<const DroneTruth> drones, std::span<const PayloadBits> payloads,
                     const NoiseParams& noise, double lambda_c, int M, int num_antennas) {
  if (drones.empty()) throw ConfigurationError("at least one drone is required");
  if (payloads.size() != drones.size()) {
    throw InputShapeError("one payload per drone is required");
  }
  if (num_antennas < 1) throw ConfigurationError("num_antennas must be >= 1");
  if (M < 0) throw DomainError("M must be non-negative");
  if (noise.sigma2 < 0.0) throw DomainError("noise variance must be non-negative");

  const int K = static_cast<int>(drones.size());
  const int cols = static_cast<int>(kPacketChips) + M;

  Synthesis out;
  out.H.resize(num_antennas, K);
  out.packets.reserve(drones.size());

  double previous = 0.0;
  for (int k = 0; k < K; ++k) {
    const DroneTruth& d = drones[static_cast<std::size_t>(k)];
    if (static_cast<int>(d.theta.size()) != num_antennas) {
      throw InputShapeError("drone " + std::to_string(k + 1) + " needs one phase per antenna");
    }
    const double beta = amplitude(d, lambda_c);
    if (k > 0 && !(beta < previous)) {
      throw ConfigurationError("received powers must be strictly decreasing in drone order");
    }
    previous = beta;
    for (int l = 0; l < num_antennas; ++l) out.H(l, k) = std::polar(beta, d.theta[static_cast<std::size_t>(l)]);
    out.packets.push_back(build_packet(payloads[static_cast<std::size_t>(k)]));
  }

  ComplexMatrix Y = ComplexMatrix::Zero(num_antennas, cols);
  for (int k = 0; k < K; ++k) {
    const DelayedWindow x = apply_delay(out.packets[static_cast<std::size_t>(k)],
                                        drones[static_cast<std::size_t>(k)].delay, M);
    for (int n = 0; n < cols; ++n) {
      if (x.x[static_cast<std::size_t>(n)] != 0) Y.col(n) += out.H.col(k);
    }
  }

  if (noise.sigma2 > 0.0) {
    std::mt19937_64 rng(noise.seed);
    // Real and imaginary parts each carry half the complex variance.
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise.sigma2 / 2.0));
    for (int n = 0; n < cols; ++n) {
      for (int l = 0; l < num_antennas; ++l) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        Y(l, n) += Complex(re, im);
      }
    }
  }

  out.window.Y = std::move(Y);
  out.window.lambda_c = lambda_c;
  out.window.K = K;
  out.window.M = M;
  return out;
}

Synthesis synthesize(std::span<const DroneTruth> drones, const NoiseParams& noise, double lambda_c,
                     int M, int num_antennas, std::uint64_t payload_seed) {
  std::mt19937_64 rng(payload_seed);
  std::vector<PayloadBits> payloads;
  payloads.reserve(drones.size());
  for (std::size_t k = 0; k < drones.size(); ++k) payloads.push_back(PayloadBits::random(rng));
  return synthesize(drones, payloads, noise, lambda_c, M, num_antennas);
}

double snr_to_sigma2(double gamma_db, std::span<const double> powers,
                     std::span<const double> mean_ranges, double lambda_c) {
  if (powers.size() != mean_ranges.size()) {
    throw InputShapeError("powers and mean ranges must have equal length");
  }
  double received = 0.0;
  for (std::size_t k = 0; k < powers.size(); ++k) {
    received += powers[k] * path_loss(mean_ranges[k], lambda_c);
  }
  return received / std::pow(10.0, gamma_db / 10.0);
}

}  // namespace adsbrange
