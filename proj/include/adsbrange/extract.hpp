#pragma once

// Range and phase-offset estimates from reordered singleton modes.

#include <optional>
#include <span>
#include <string_view>

#include "adsbrange/types.hpp"

namespace adsbrange {

/// Inverts free-space path loss: lambda_c sqrt(P) / (4 pi |mu|).
/// Returns nullopt for a zero-magnitude (or non-finite) mode.
std::optional<double> estimate_range(Complex mu_hat, double power, double lambda_c);
std::optional<double> range_from_magnitude(double magnitude, double power, double lambda_c);

/// Quadrant-corrected arctangent of Im/Re (Re >= 0 branch at Re = 0),
/// wrapped to [0, 2pi). Returns nullopt for mu_hat = 0.
std::optional<double> estimate_phase(Complex mu_hat);

struct OutlierFilter {
  enum class Kind { none, mad };
  Kind kind = Kind::none;
  double cutoff = 3.0;  // multiples of the median absolute deviation

  static OutlierFilter none() { return {Kind::none, 3.0}; }
  static OutlierFilter mad(double c = 3.0) { return {Kind::mad, c}; }
};

std::string_view to_string(OutlierFilter::Kind kind);

/// Mean of |mu| across antennas. With the MAD filter, antennas whose
/// magnitude lies more than cutoff * MAD from the median are dropped first;
/// if every antenna would be dropped the plain mean is returned.
/// Throws DomainError on empty input.
double combine_magnitudes(std::span<const Complex> mu_per_antenna, OutlierFilter filter);
double combine_magnitudes(std::span<const double> magnitudes, OutlierFilter filter);

/// Median of a non-empty sample (mean of the two central values for even sizes).
double median(std::span<const double> values);

}  // namespace adsbrange
