#pragma once

// Binary window dump: 32-byte header followed by little-endian float64
// (re, im) pairs, row-major (antenna-major).
//
//   offset  size  field
//   0       8     magic "ADSBWIN1"
//   8       4     N_r      (uint32)
//   12      4     N + 1    (uint32)
//   16      4     K        (uint32)
//   20      4     M        (uint32)
//   24      8     lambda_c (float64)

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "adsbrange/channel.hpp"

namespace adsbrange {

inline constexpr char kWindowMagic[8] = {'A', 'D', 'S', 'B', 'W', 'I', 'N', '1'};
inline constexpr std::size_t kWindowHeaderBytes = 32;

std::vector<std::uint8_t> encode_window(const ObservationWindow& window);
ObservationWindow decode_window(const std::vector<std::uint8_t>& bytes);

void write_window(const std::filesystem::path& path, const ObservationWindow& window);
ObservationWindow read_window(const std::filesystem::path& path);

}  // namespace adsbrange
