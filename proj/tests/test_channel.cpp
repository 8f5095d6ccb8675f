#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "adsbrange/channel.hpp"
#include "adsbrange/errors.hpp"
#include "adsbrange/observation_io.hpp"

using namespace adsbrange;

TEST_CASE("path loss") {
  const double lambda = 0.2752;
  CHECK(path_loss(lambda / (4.0 * kPi), lambda) == doctest::Approx(1.0));
  CHECK(path_loss(1000.0, lambda) == doctest::Approx(4.796e-10).epsilon(1e-3));
  CHECK(path_loss(2000.0, lambda) == doctest::Approx(path_loss(1000.0, lambda) / 4.0));
  CHECK_THROWS_AS(path_loss(0.0, lambda), DomainError);
  CHECK_THROWS_AS(path_loss(10.0, -1.0), DomainError);
}

TEST_CASE("snr to noise variance") {
  const std::vector<double> p1{1.0};
  const std::vector<double> r1{1750.0};
  const double l = std::pow(0.2752 / (4.0 * kPi * 1750.0), 2);
  CHECK(snr_to_sigma2(0.0, p1, r1, 0.2752) == doctest::Approx(l));
  CHECK(snr_to_sigma2(20.0, p1, r1, 0.2752) == doctest::Approx(l / 100.0));
  CHECK(snr_to_sigma2(10.0, p1, r1, 0.2752) == doctest::Approx(snr_to_sigma2(0.0, p1, r1, 0.2752) / 10.0));
}

TEST_CASE("single drone noiseless window is the scaled packet") {
  DroneTruth d{1.0, 1000.0, {0.0}, 0};
  const auto s = synthesize(std::span<const DroneTruth>(&d, 1), NoiseParams{0.0, 1}, 0.2752, 20, 1, 77);
  const double beta = std::sqrt(path_loss(1000.0, 0.2752));
  REQUIRE(s.window.Y.cols() == 260);
  for (int n = 0; n < 240; ++n) {
    CHECK(s.window.Y(0, n) == Complex(beta * s.packets[0][static_cast<std::size_t>(n)], 0.0));
  }
  for (int n = 240; n < 260; ++n) CHECK(s.window.Y(0, n) == Complex(0.0, 0.0));
}

TEST_CASE("two drone noiseless alphabet") {
  std::vector<DroneTruth> drones{{1.0, 700.0, {0.4, 2.0}, 3}, {1.0, 2100.0, {5.1, 1.3}, 11}};
  const auto s = synthesize(drones, NoiseParams{0.0, 1}, 0.2752, 20, 2, 5);
  for (int l = 0; l < 2; ++l) {
    const Complex h1 = s.H(l, 0), h2 = s.H(l, 1);
    const std::vector<Complex> alphabet{0.0, h1, h2, h1 + h2};
    for (int n = 0; n < s.window.Y.cols(); ++n) {
      bool found = false;
      for (const auto& v : alphabet) found = found || std::abs(s.window.Y(l, n) - v) < 1e-15;
      CHECK(found);
    }
  }
  CHECK(std::abs(s.H(0, 0)) == doctest::Approx(std::abs(s.H(1, 0))));
}

TEST_CASE("noise is seeded and has the requested variance") {
  DroneTruth d{1.0, 1000.0, {1.0, 2.0, 3.0}, 4};
  const NoiseParams noise{2.5, 99};
  const auto a = synthesize(std::span<const DroneTruth>(&d, 1), noise, 0.2752, 20, 3, 1);
  const auto b = synthesize(std::span<const DroneTruth>(&d, 1), noise, 0.2752, 20, 3, 1);
  CHECK((a.window.Y.array() == b.window.Y.array()).all());

  DroneTruth faint{1.0, 1e9, {0.0}, 0};
  std::vector<PayloadBits> payload(1);
  double acc = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto s = synthesize(std::span<const DroneTruth>(&faint, 1), payload, NoiseParams{2.5, seed}, 0.2752, 20, 1);
    acc += s.window.Y.cwiseAbs2().sum();
    count += static_cast<int>(s.window.Y.size());
  }
  CHECK(acc / count == doctest::Approx(2.5).epsilon(0.03));
}

TEST_CASE("received power must be strictly ordered") {
  std::vector<DroneTruth> drones{{1.0, 2000.0, {0.0}, 0}, {1.0, 1000.0, {0.0}, 0}};
  CHECK_THROWS_AS(synthesize(drones, NoiseParams{}, 0.2752, 20, 1, 0), ConfigurationError);
  std::vector<DroneTruth> short_theta{{1.0, 1000.0, {0.0}, 0}};
  CHECK_THROWS_AS(synthesize(short_theta, NoiseParams{}, 0.2752, 20, 2, 0), InputShapeError);
}

TEST_CASE("window dump round trip") {
  DroneTruth d{1.0, 900.0, {0.3, 1.7}, 6};
  const auto s = synthesize(std::span<const DroneTruth>(&d, 1), NoiseParams{1e-9, 3}, 0.2752, 10, 2, 4);
  const auto bytes = encode_window(s.window);
  CHECK(bytes.size() == kWindowHeaderBytes + 2 * 250 * 16);
  CHECK(std::equal(bytes.begin(), bytes.begin() + 8, "ADSBWIN1"));
  const auto back = decode_window(bytes);
  CHECK(back.K == 1);
  CHECK(back.M == 10);
  CHECK(back.lambda_c == 0.2752);
  CHECK((back.Y.array() == s.window.Y.array()).all());

  auto broken = bytes;
  broken[0] = 'X';
  CHECK_THROWS(decode_window(broken));
  broken = bytes;
  broken.pop_back();
  CHECK_THROWS(decode_window(broken));
}
