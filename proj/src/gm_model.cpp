#include "adsbrange/gm_model.hpp"

#include <bit>
#include <cmath>
#include <algorithm>
#include <limits>
#include <string>

#include "adsbrange/errors.hpp"

namespace adsbrange {

BernoulliParam bernoulli_p(int M) {
  if (M < 0) throw DomainError("M must be non-negative, got " + std::to_string(M));
  return {static_cast<double>(M + 124) / static_cast<double>(M + 240), M};
}

RealVector mixture_weights(double p, int K) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("Bernoulli parameter must lie in (0, 1)");
  if (K < 1 || K > 30) throw DomainError("K must be in [1, 30]");
  const std::size_t count = std::size_t{1} << K;
  RealVector xi(static_cast<Eigen::Index>(count));
  for (std::size_t a = 0; a < count; ++a) {
    const int ones = std::popcount(a);
    xi(static_cast<Eigen::Index>(a)) = std::pow(p, ones) * std::pow(1.0 - p, K - ones);
  }
  return xi;
}

ComplexVector mode_vector(const ComplexVector& h) {
  const int K = static_cast<int>(h.size());
  if (K < 1 || K > 30) throw DomainError("K must be in [1, 30]");
  const std::size_t count = std::size_t{1} << K;
  ComplexVector mu(static_cast<Eigen::Index>(count));
  for (std::size_t a = 0; a < count; ++a) {
    Complex sum{0.0, 0.0};
    for (int k = 0; k < K; ++k) {
      if (((a >> k) & 1U) == 0U) sum += h(k);
    }
    mu(static_cast<Eigen::Index>(a)) = sum;
  }
  return mu;
}

std::size_t singleton_index(int k, int K) {
  if (K < 1 || K > 30 || k < 1 || k > K) {
    throw DomainError("singleton index requires 1 <= k <= K");
  }
  return ((std::size_t{1} << K) - 1) - (std::size_t{1} << (k - 1));
}

GaussianMixtureSpec make_mixture(const ComplexVector& h, int M, double sigma2) {
  GaussianMixtureSpec spec;
  spec.K = static_cast<int>(h.size());
  spec.weights = mixture_weights(bernoulli_p(M).p, spec.K);
  spec.modes = mode_vector(h);
  spec.sigma2 = sigma2;
  return spec;
}

double gm_logpdf(Complex y, const GaussianMixtureSpec& spec) {
  if (!(spec.sigma2 > 0.0)) throw DomainError("sigma2 must be positive");
  if (spec.weights.size() != spec.modes.size()) {
    throw InputShapeError("weights and modes must have equal length");
  }
  const double log_norm = -std::log(kPi * spec.sigma2);
  double peak = -std::numeric_limits<double>::infinity();
  RealVector terms(spec.modes.size());
  for (Eigen::Index a = 0; a < spec.modes.size(); ++a) {
    const double w = spec.weights(a);
    terms(a) = w > 0.0 ? std::log(w) - std::norm(y - spec.modes(a)) / spec.sigma2
                       : -std::numeric_limits<double>::infinity();
    peak = std::max(peak, terms(a));
  }
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (Eigen::Index a = 0; a < terms.size(); ++a) acc += std::exp(terms(a) - peak);
  return log_norm + peak + std::log(acc);
}

}  // namespace adsbrange
