#pragma once

// Expectation-maximization for the mode vector of the received mixture.
//
// Weights xi and the noise variance are known and held fixed; only the
// N_r x 2^K complex modes are estimated. In the joint (default) variant all
// antennas share one latent component index per sample, so a sample's
// responsibility combines the likelihoods of every antenna. The returned
// modes are an arbitrary permutation of the true ones.

#include <cstdint>
#include <optional>
#include <vector>

#include "adsbrange/types.hpp"

namespace adsbrange {

enum class InitMethod { kmeanspp, provided };
enum class AntennaCoupling { joint, independent };

struct EmConfig {
  // Stop when ||eta(t+1) - eta(t)||_2 < epsilon * rms(|y|).
  double epsilon = 1e-6;
  int max_iterations = 200;
  int restarts = 10;
  InitMethod init = InitMethod::kmeanspp;
  AntennaCoupling coupling = AntennaCoupling::joint;
  std::uint64_t seed = 0;
  // Used when init == provided: N_r x 2^K starting modes.
  std::optional<ComplexMatrix> initial_modes;
  bool record_trace = false;

  void validate() const;
};

struct EmState {
  ComplexMatrix eta;  // N_r x 2^K
  RealMatrix resp;    // 2^K x (N+1)
  double loglik = 0.0;
};

/// Outcome of a single EM run from one initialization.
struct EmRun {
  ComplexMatrix eta;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  bool collapsed = false;
  std::vector<double> loglik_trace;  // loglik of eta(0), eta(1), ... when recorded
};

struct EmResult {
  ComplexMatrix eta;  // best restart
  double loglik = 0.0;
  int iterations = 0;  // of the best restart
  int restarts_ok = 0;
  int best_restart = -1;
  bool failed = false;
  std::vector<EmRun> runs;  // only when record_trace is set
};

/// Posterior component probabilities, 2^K x (N+1), columns sum to one.
RealMatrix responsibilities(const ComplexMatrix& Y, const ComplexMatrix& eta,
                            const RealVector& weights, double sigma2);

/// E-step returning the responsibilities and the observed-data log-likelihood
/// of `eta` in one pass.
EmState e_step(const ComplexMatrix& Y, const ComplexMatrix& eta, const RealVector& weights,
               double sigma2);

/// Observed-data log-likelihood sum_n log sum_a xi_a prod_l CN(y_ln; eta_la, sigma2).
double observed_loglik(const ComplexMatrix& Y, const ComplexMatrix& eta, const RealVector& weights,
                       double sigma2);

/// Responsibility-weighted means. Returns nullopt when a component carries no
/// responsibility mass (collapse).
std::optional<ComplexMatrix> em_update(const ComplexMatrix& Y, const RealMatrix& resp);

/// k-means++ seeding on the stacked N_r-dimensional sample vectors.
ComplexMatrix kmeanspp_init(const ComplexMatrix& Y, int count, std::uint64_t seed);

/// EM from a fixed starting point (joint coupling).
EmRun run_em_from(const ComplexMatrix& Y, const ComplexMatrix& eta0, const RealVector& weights,
                  double sigma2, const EmConfig& config);

/// Random-restart EM; keeps the restart with the highest log-likelihood
/// (lowest restart index on ties).
EmResult run_em(const ComplexMatrix& Y, const RealVector& weights, double sigma2,
                const EmConfig& config);

}  // namespace adsbrange
