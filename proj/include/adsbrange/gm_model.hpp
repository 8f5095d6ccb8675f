#pragma once

// I.i.d. Gaussian-mixture description of the received samples.
//
// Each chip is approximated as an independent Bernoulli variable that is
// zero with probability p = (M+124)/(M+240). The superposition of K such
// chips scaled by the gains h_k, plus CN(0, sigma2) noise, is a 2^K-component
// mixture. Component a = (b_K ... b_1)_2 sits at mu_a = sum_k (1 - b_k) h_k
// with weight xi_a = p^{sum b} (1-p)^{K - sum b}; the last component is the
// all-zero mode and the singleton mode of drone k has exactly bit k-1 cleared.

#include <cstddef>

#include "adsbrange/types.hpp"

namespace adsbrange {

struct BernoulliParam {
  double p = 0.0;  // probability of a zero chip
  int M = 0;
};

struct GaussianMixtureSpec {
  int K = 0;
  RealVector weights;    // 2^K
  ComplexVector modes;   // 2^K
  double sigma2 = 0.0;
};

/// Throws DomainError for negative M.
BernoulliParam bernoulli_p(int M);

RealVector mixture_weights(double p, int K);

/// modes[a] = sum_k (1 - b_k) h[k-1].
ComplexVector mode_vector(const ComplexVector& h);

/// Index of the mode equal to h_k (k is 1-based): (2^K - 1) - 2^{k-1}.
std::size_t singleton_index(int k, int K);

/// Assembles the full mixture for gains `h` at maximum delay M.
GaussianMixtureSpec make_mixture(const ComplexVector& h, int M, double sigma2);

/// log sum_a xi_a CN(y; mu_a, sigma2). Throws DomainError if sigma2 <= 0.
double gm_logpdf(Complex y, const GaussianMixtureSpec& spec);

}  // namespace adsbrange
