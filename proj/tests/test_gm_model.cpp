#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "adsbrange/channel.hpp"
#include "adsbrange/errors.hpp"
#include "adsbrange/gm_model.hpp"
#include "oracles.hpp"

using namespace adsbrange;

TEST_CASE("bernoulli parameter") {
  CHECK(bernoulli_p(20).p == doctest::Approx(144.0 / 260.0));
  CHECK(bernoulli_p(0).p == doctest::Approx(124.0 / 240.0));
  CHECK_THROWS_AS(bernoulli_p(-1), DomainError);
  for (int M : {0, 10, 20, 50, 100}) {
    CHECK(std::abs(oracle::bernoulli_grid_argmax(M, 1e-5) - bernoulli_p(M).p) < 1e-4);
  }
}

TEST_CASE("mixture weights") {
  const auto w1 = mixture_weights(0.3, 1);
  CHECK(w1(0) == doctest::Approx(0.7));
  CHECK(w1(1) == doctest::Approx(0.3));
  const auto w2 = mixture_weights(0.5, 2);
  for (int a = 0; a < 4; ++a) CHECK(w2(a) == doctest::Approx(0.25));
  for (int K = 1; K <= 5; ++K) {
    CHECK(mixture_weights(0.61, K).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("mode vector and singleton indices") {
  const Complex h1(3.0, 1.0), h2(-0.5, 1.5), h3(0.2, -0.4);
  ComplexVector h2v(2);
  h2v << h1, h2;
  const auto m2 = mode_vector(h2v);
  CHECK(m2(0) == h1 + h2);
  CHECK(m2(1) == h2);
  CHECK(m2(2) == h1);
  CHECK(m2(3) == Complex(0.0));

  ComplexVector h3v(3);
  h3v << h1, h2, h3;
  const auto m3 = mode_vector(h3v);
  CHECK(m3(6) == h1);
  CHECK(m3(5) == h2);
  CHECK(m3(3) == h3);
  CHECK(m3(7) == Complex(0.0));

  CHECK(singleton_index(1, 4) == 14);
  CHECK(singleton_index(2, 4) == 13);
  CHECK(singleton_index(3, 4) == 11);
  CHECK(singleton_index(4, 4) == 7);
  CHECK(singleton_index(1, 1) == 0);
  CHECK_THROWS_AS(singleton_index(0, 3), DomainError);
  CHECK_THROWS_AS(singleton_index(4, 3), DomainError);

  const auto zero = mode_vector(ComplexVector::Zero(3));
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int K = 1; K <= 4; ++K) {
    ComplexVector h(K);
    std::vector<Complex> hv;
    for (int k = 0; k < K; ++k) {
      h(k) = Complex(g(rng), g(rng));
      hv.push_back(h(k));
    }
    const auto modes = mode_vector(h);
    const auto ref = oracle::alphabet(hv);
    for (int a = 0; a < (1 << K); ++a) CHECK(std::abs(modes(a) - ref[static_cast<std::size_t>(a)]) < 1e-14);
    for (int k = 1; k <= K; ++k) CHECK(modes(static_cast<Eigen::Index>(singleton_index(k, K))) == h(k - 1));
  }
}

TEST_CASE("mixture log density") {
  ComplexVector h(1);
  h << Complex(2.0, 0.0);
  GaussianMixtureSpec spec{1, RealVector(2), mode_vector(h), 1.0};
  spec.weights << 1.0, 0.0;
  CHECK(gm_logpdf(Complex(2.0, 0.0), spec) == doctest::Approx(std::log(1.0 / kPi)));

  ComplexVector h2(2);
  h2 << Complex(1.5, 0.5), Complex(-0.4, 0.9);
  const auto mix = make_mixture(h2, 20, 0.3);
  const double total = oracle::integrate_2d(
      [&](double x, double y) { return std::exp(gm_logpdf(Complex(x, y), mix)); }, -5.0, 6.0, -5.0, 6.5, 800);
  CHECK(std::abs(total - 1.0) < 1e-3);

  const Complex far(60.0, -80.0);
  double best = -1e300;
  for (int a = 0; a < 4; ++a) {
    best = std::max(best, std::log(mix.weights(a) / (kPi * 0.3)) - std::norm(far - mix.modes(a)) / 0.3);
  }
  CHECK(gm_logpdf(far, mix) == doctest::Approx(best).epsilon(1e-9));

  auto bad = mix;
  bad.sigma2 = 0.0;
  CHECK_THROWS_AS(gm_logpdf(Complex(0.0), bad), DomainError);
}

TEST_CASE("noiseless occupancy matches the exact enumerated expectation") {
  const int M = 20;
  const auto pz = oracle::zero_probability_by_position(M);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::uniform_int_distribution<int> delay(0, M);
  for (int K = 1; K <= 3; ++K) {
    const std::size_t A = std::size_t{1} << K;
    std::vector<double> expected(A, 0.0);
    for (double q : pz) {
      for (std::size_t a = 0; a < A; ++a) {
        const int z = std::popcount(a);
        expected[a] += std::pow(q, z) * std::pow(1.0 - q, K - z) / static_cast<double>(pz.size());
      }
    }
    std::vector<double> counts(A, 0.0);
    double samples = 0.0;
    int window = 0;
    while (samples < 1e5) {
      std::vector<DroneTruth> drones;
      for (int k = 0; k < K; ++k) drones.push_back({1.0, 600.0 + 900.0 * k, {phase(rng)}, delay(rng)});
      const auto s = synthesize(drones, NoiseParams{}, 0.2752, M, 1, static_cast<std::uint64_t>(window++));
      std::vector<Complex> hv;
      for (int k = 0; k < K; ++k) hv.push_back(s.H(0, k));
      const auto ref = oracle::alphabet(hv);
      for (int n = 0; n < s.window.Y.cols(); ++n) {
        std::size_t best = 0;
        for (std::size_t a = 1; a < A; ++a) {
          if (std::abs(s.window.Y(0, n) - ref[a]) < std::abs(s.window.Y(0, n) - ref[best])) best = a;
        }
        counts[best] += 1.0;
        samples += 1.0;
      }
    }
    for (std::size_t a = 0; a < A; ++a) {
      const double f = counts[a] / samples;
      const double se = std::sqrt(expected[a] * (1.0 - expected[a]) / samples);
      // Chips of one packet are correlated, so allow a wider band than iid.
      CHECK(std::abs(f - expected[a]) < 6.0 * se);
    }
  }
}
