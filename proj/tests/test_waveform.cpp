#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"

#include "adsbrange/errors.hpp"
#include "adsbrange/waveform.hpp"

using namespace adsbrange;

namespace {

PayloadBits constant_payload(Chip value) {
  std::vector<Chip> bits(kPayloadBits, value);
  return PayloadBits(bits);
}

int ones(const auto& chips) { return static_cast<int>(std::count(chips.begin(), chips.end(), Chip{1})); }

}  // namespace

TEST_CASE("manchester pairs") {
  const auto all_ones = encode_manchester(constant_payload(1));
  const auto all_zeros = encode_manchester(constant_payload(0));
  for (std::size_t i = 0; i < kPayloadBits; ++i) {
    CHECK(all_ones[2 * i] == 1);
    CHECK(all_ones[2 * i + 1] == 0);
    CHECK(all_zeros[2 * i] == 0);
    CHECK(all_zeros[2 * i + 1] == 1);
  }
  CHECK(ones(all_ones) == 112);
  CHECK(ones(all_zeros) == 112);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) CHECK(ones(encode_manchester(PayloadBits::random(rng))) == 112);
}

TEST_CASE("payload shape is checked") {
  std::vector<Chip> short_bits(111, 0);
  CHECK_THROWS_AS(PayloadBits{short_bits}, InputShapeError);
  CHECK_THROWS_AS(encode_manchester(std::span<const Chip>(short_bits)), InputShapeError);
  std::vector<Chip> bad(112, 0);
  bad[3] = 2;
  CHECK_THROWS_AS(PayloadBits{bad}, InputShapeError);
}

TEST_CASE("packet layout") {
  const std::vector<Chip> preamble = {1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0};
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto packet = build_packet(PayloadBits::random(rng));
    CHECK(std::equal(preamble.begin(), preamble.end(), packet.begin()));
    CHECK(ones(packet) == 116);
  }
  const auto zero = build_packet(constant_payload(0));
  std::vector<int> expected;
  for (int i : {0, 2, 9, 11}) expected.push_back(i);
  for (int i = 17; i < 240; i += 2) expected.push_back(i);
  std::vector<int> got;
  for (int i = 0; i < 240; ++i) {
    if (zero[static_cast<std::size_t>(i)]) got.push_back(i);
  }
  CHECK(got == expected);
}

TEST_CASE("delay placement") {
  std::mt19937_64 rng(2);
  const auto packet = build_packet(PayloadBits::random(rng));

  const auto head = apply_delay(packet, 0, 20);
  REQUIRE(head.x.size() == 260);
  CHECK(std::equal(packet.begin(), packet.end(), head.x.begin()));
  CHECK(std::all_of(head.x.begin() + 240, head.x.end(), [](Chip c) { return c == 0; }));

  const auto tail = apply_delay(packet, 20, 20);
  CHECK(std::all_of(tail.x.begin(), tail.x.begin() + 20, [](Chip c) { return c == 0; }));
  CHECK(std::equal(packet.begin(), packet.end(), tail.x.begin() + 20));

  const auto mid = apply_delay(packet, 7, 20);
  CHECK(std::all_of(mid.x.begin(), mid.x.begin() + 7, [](Chip c) { return c == 0; }));
  CHECK(std::equal(packet.begin(), packet.end(), mid.x.begin() + 7));
  CHECK(std::all_of(mid.x.begin() + 247, mid.x.end(), [](Chip c) { return c == 0; }));
  CHECK(ones(mid.x) == 116);

  CHECK_THROWS_AS(apply_delay(packet, -1, 20), DomainError);
  CHECK_THROWS_AS(apply_delay(packet, 21, 20), DomainError);
}
