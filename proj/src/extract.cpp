#include "adsbrange/extract.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "adsbrange/errors.hpp"

namespace adsbrange {

std::optional<double> range_from_magnitude(double magnitude, double power, double lambda_c) {
  if (!(power > 0.0) || !(lambda_c > 0.0)) throw DomainError("power and wavelength must be positive");
  if (!(magnitude > 0.0) || !std::isfinite(magnitude)) return std::nullopt;
  return lambda_c * std::sqrt(power) / (4.0 * kPi * magnitude);
}

std::optional<double> estimate_range(Complex mu_hat, double power, double lambda_c) {
  return range_from_magnitude(std::abs(mu_hat), power, lambda_c);
}

std::optional<double> estimate_phase(Complex mu_hat) {
  const double re = mu_hat.real();
  const double im = mu_hat.imag();
  if ((re == 0.0 && im == 0.0) || !std::isfinite(re) || !std::isfinite(im)) return std::nullopt;
  double theta;
  if (re == 0.0) {
    theta = im > 0.0 ? kPi / 2.0 : -kPi / 2.0;
  } else if (re > 0.0) {
    theta = std::atan(im / re);
  } else {
    theta = std::atan(im / re) + kPi;
  }
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta = 0.0;
  return theta;
}

std::string_view to_string(OutlierFilter::Kind kind) {
  return kind == OutlierFilter::Kind::mad ? "mad" : "none";
}

double median(std::span<const double> values) {
  if (values.empty()) throw DomainError("median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double combine_magnitudes(std::span<const double> magnitudes, OutlierFilter filter) {
  if (magnitudes.empty()) throw DomainError("no antenna magnitudes to combine");
  auto mean = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  if (filter.kind == OutlierFilter::Kind::none) return mean(magnitudes);

  const double center = median(magnitudes);
  std::vector<double> deviations;
  deviations.reserve(magnitudes.size());
  for (double m : magnitudes) deviations.push_back(std::abs(m - center));
  const double mad = median(deviations);

  std::vector<double> kept;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    if (deviations[i] <= filter.cutoff * mad) kept.push_back(magnitudes[i]);
  }
  if (kept.empty()) return mean(magnitudes);
  return mean(kept);
}

double combine_magnitudes(std::span<const Complex> mu_per_antenna, OutlierFilter filter) {
  std::vector<double> mags;
  mags.reserve(mu_per_antenna.size());
  for (Complex z : mu_per_antenna) mags.push_back(std::abs(z));
  return combine_magnitudes(std::span<const double>(mags), filter);
}

}  // namespace adsbrange
