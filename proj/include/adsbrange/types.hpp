#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace adsbrange {

using Complex = std::complex<double>;

// Rows are antennas, columns are samples (or mixture components).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Carrier wavelength at 1090 MHz, in meters.
inline constexpr double kAdsbWavelength = 0.2752;

}  // namespace adsbrange
