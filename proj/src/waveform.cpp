#include "adsbrange/waveform.hpp"

#include <algorithm>
#include <string>

#include "adsbrange/errors.hpp"

namespace adsbrange {

PayloadBits::PayloadBits(std::span<const Chip> bits) {
  if (bits.size() != kPayloadBits) {
    throw InputShapeError("payload must have 112 bits, got " + std::to_string(bits.size()));
  }
  if (std::any_of(bits.begin(), bits.end(), [](Chip b) { return b > 1; })) {
    throw InputShapeError("payload bits must be 0 or 1");
  }
  std::copy(bits.begin(), bits.end(), bits_.begin());
}

PayloadBits PayloadBits::random(std::mt19937_64& rng) {
  PayloadBits out;
  // One 64-bit draw covers 64 bits of payload.
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < kPayloadBits; ++i) {
    if (i % 64 == 0) word = rng();
    out.bits_[i] = static_cast<Chip>(word & 1U);
    word >>= 1;
  }
  return out;
}

std::array<Chip, kDataChips> encode_manchester(const PayloadBits& payload) {
  std::array<Chip, kDataChips> chips{};
  const auto& bits = payload.bits();
  for (std::size_t i = 0; i < kPayloadBits; ++i) {
    chips[2 * i] = bits[i];
    chips[2 * i + 1] = static_cast<Chip>(1U - bits[i]);
  }
  return chips;
}

std::array<Chip, kDataChips> encode_manchester(std::span<const Chip> payload) {
  return encode_manchester(PayloadBits(payload));
}

PacketChips build_packet(const PayloadBits& payload) {
  PacketChips packet{};
  std::copy(kPreamble.begin(), kPreamble.end(), packet.begin());
  const auto data = encode_manchester(payload);
  std::copy(data.begin(), data.end(), packet.begin() + kPreambleChips);
  return packet;
}

DelayedWindow apply_delay(const PacketChips& packet, int m, int M) {
  if (M < 0 || m < 0 || m > M) {
    throw DomainError("delay m=" + std::to_string(m) + " outside [0, " + std::to_string(M) + "]");
  }
  DelayedWindow w;
  w.m = m;
  w.M = M;
  w.x.assign(kPacketChips + static_cast<std::size_t>(M), 0);
  std::copy(packet.begin(), packet.end(), w.x.begin() + m);
  return w;
}

}  // namespace adsbrange
