#pragma once

// ADS-B packet chip sequences at one chip per sample (2 Msample/s).

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace adsbrange {

using Chip = std::uint8_t;

inline constexpr std::size_t kPayloadBits = 112;
inline constexpr std::size_t kPreambleChips = 16;
inline constexpr std::size_t kDataChips = 2 * kPayloadBits;
inline constexpr std::size_t kPacketChips = kPreambleChips + kDataChips;  // 240
inline constexpr std::size_t kPacketOnes = 116;

inline constexpr std::array<Chip, kPreambleChips> kPreamble = {1, 0, 1, 0, 0, 0, 0, 0,
                                                               0, 1, 0, 1, 0, 0, 0, 0};

/// The 112-bit data block before Manchester encoding.
class PayloadBits {
 public:
  PayloadBits() = default;
  /// Throws InputShapeError unless `bits` has 112 entries, each 0 or 1.
  explicit PayloadBits(std::span<const Chip> bits);

  static PayloadBits random(std::mt19937_64& rng);

  const std::array<Chip, kPayloadBits>& bits() const { return bits_; }

 private:
  std::array<Chip, kPayloadBits> bits_{};
};

using PacketChips = std::array<Chip, kPacketChips>;

/// A packet placed at integer delay m inside a window of 240 + M chips.
struct DelayedWindow {
  std::vector<Chip> x;
  int m = 0;
  int M = 0;
};

/// Bit 1 -> (1,0), bit 0 -> (0,1).
std::array<Chip, kDataChips> encode_manchester(const PayloadBits& payload);
/// Span overload; validates length and values.
std::array<Chip, kDataChips> encode_manchester(std::span<const Chip> payload);

/// Preamble followed by the Manchester-coded payload.
PacketChips build_packet(const PayloadBits& payload);

/// Zero-pads `packet` with m leading and M - m trailing chips.
/// Throws DomainError unless 0 <= m <= M.
DelayedWindow apply_delay(const PacketChips& packet, int m, int M);

}  // namespace adsbrange
