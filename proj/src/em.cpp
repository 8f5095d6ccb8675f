#include "adsbrange/em.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "adsbrange/errors.hpp"
#include "adsbrange/rng.hpp"

namespace adsbrange {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shapes(const ComplexMatrix& Y, const ComplexMatrix& eta, const RealVector& weights,
                  double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("EM requires sigma2 > 0");
  if (eta.rows() != Y.rows() || eta.cols() != weights.size()) {
    throw InputShapeError("eta must be N_r x (number of weights)");
  }
  if (Y.cols() < 1) throw InputShapeError("observation window is empty");
}

double rms_magnitude(const ComplexMatrix& Y) {
  if (Y.size() == 0) return 0.0;
  return std::sqrt(Y.squaredNorm() / static_cast<double>(Y.size()));
}

}  // namespace

void EmConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigurationError("EM epsilon must be positive");
  if (max_iterations < 1) throw ConfigurationError("EM max_iterations must be >= 1");
  if (restarts < 1) throw ConfigurationError("EM restarts must be >= 1");
  if (init == InitMethod::provided && !initial_modes) {
    throw ConfigurationError("provided initialization requires initial_modes");
  }
}

EmState e_step(const ComplexMatrix& Y, const ComplexMatrix& eta, const RealVector& weights,
               double sigma2) {
  check_shapes(Y, eta, weights, sigma2);
  const Eigen::Index components = weights.size();
  const Eigen::Index samples = Y.cols();
  const Eigen::Index antennas = Y.rows();

  RealVector log_w(components);
  for (Eigen::Index a = 0; a < components; ++a) {
    log_w(a) = weights(a) > 0.0 ? std::log(weights(a)) : kNegInf;
  }
  const double log_norm = -static_cast<double>(antennas) * std::log(kPi * sigma2);

  EmState state;
  state.eta = eta;
  state.resp.resize(components, samples);
  state.loglik = 0.0;

  RealVector terms(components);
  for (Eigen::Index n = 0; n < samples; ++n) {
    double peak = kNegInf;
    for (Eigen::Index a = 0; a < components; ++a) {
      double t = log_w(a);
      if (t != kNegInf) {
        double dist = 0.0;
        for (Eigen::Index l = 0; l < antennas; ++l) dist += std::norm(Y(l, n) - eta(l, a));
        t -= dist / sigma2;
      }
      terms(a) = t;
      peak = std::max(peak, t);
    }
    if (peak == kNegInf) throw DomainError("all mixture weights are zero");
    double acc = 0.0;
    for (Eigen::Index a = 0; a < components; ++a) acc += std::exp(terms(a) - peak);
    const double lse = peak + std::log(acc);
    for (Eigen::Index a = 0; a < components; ++a) state.resp(a, n) = std::exp(terms(a) - lse);
    state.loglik += lse + log_norm;
  }
  return state;
}

RealMatrix responsibilities(const ComplexMatrix& Y, const ComplexMatrix& eta,
                            const RealVector& weights, double sigma2) {
  return e_step(Y, eta, weights, sigma2).resp;
}

double observed_loglik(const ComplexMatrix& Y, const ComplexMatrix& eta, const RealVector& weights,
                       double sigma2) {
  return e_step(Y, eta, weights, sigma2).loglik;
}

std::optional<ComplexMatrix> em_update(const ComplexMatrix& Y, const RealMatrix& resp) {
  if (resp.cols() != Y.cols()) throw InputShapeError("responsibilities must have one column per sample");
  const RealVector mass = resp.rowwise().sum();
  for (Eigen::Index a = 0; a < mass.size(); ++a) {
    if (!(mass(a) > 0.0)) return std::nullopt;
  }
  ComplexMatrix eta = Y * resp.transpose().cast<Complex>();
  for (Eigen::Index a = 0; a < mass.size(); ++a) eta.col(a) /= mass(a);
  return eta;
}

ComplexMatrix kmeanspp_init(const ComplexMatrix& Y, int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("k-means++ needs at least one center");
  const Eigen::Index samples = Y.cols();
  if (samples < count) throw InputShapeError("k-means++ needs at least as many samples as centers");

  std::mt19937_64 rng(seed);
  ComplexMatrix centers(Y.rows(), count);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(count));

  std::uniform_int_distribution<Eigen::Index> first(0, samples - 1);
  const Eigen::Index i0 = first(rng);
  centers.col(0) = Y.col(i0);

  RealVector d2(samples);
  for (Eigen::Index n = 0; n < samples; ++n) d2(n) = (Y.col(n) - centers.col(0)).squaredNorm();

  const double rms = rms_magnitude(Y);
  const double jitter = rms > 0.0 ? 1e-6 * rms : 1e-12;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int c = 1; c < count; ++c) {
    const double total = d2.sum();
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double cumulative = 0.0;
      Eigen::Index chosen = samples - 1;
      for (Eigen::Index n = 0; n < samples; ++n) {
        cumulative += d2(n);
        if (d2(n) > 0.0 && cumulative >= target) {
          chosen = n;
          break;
        }
      }
      // Guard against rounding landing on a zero-distance tail sample.
      while (d2(chosen) == 0.0 && chosen > 0) --chosen;
      centers.col(c) = Y.col(chosen);
    } else {
      // Fewer distinct samples than centers: duplicate an existing center
      // with a small random offset.
      std::uniform_int_distribution<int> which(0, c - 1);
      const int base = which(rng);
      centers.col(c) = centers.col(base);
      for (Eigen::Index l = 0; l < Y.rows(); ++l) {
        const double angle = kTwoPi * unit(rng);
        centers(l, c) += std::polar(jitter, angle);
      }
    }
    for (Eigen::Index n = 0; n < samples; ++n) {
      d2(n) = std::min(d2(n), (Y.col(n) - centers.col(c)).squaredNorm());
    }
  }
  return centers;
}

EmRun run_em_from(const ComplexMatrix& Y, const ComplexMatrix& eta0, const RealVector& weights,
                  double sigma2, const EmConfig& config) {
  EmRun run;
  const double tolerance = config.epsilon * rms_magnitude(Y);

  EmState state = e_step(Y, eta0, weights, sigma2);
  if (config.record_trace) run.loglik_trace.push_back(state.loglik);

  for (int t = 0; t < config.max_iterations; ++t) {
    auto next = em_update(Y, state.resp);
    if (!next) {
      run.collapsed = true;
      run.eta = state.eta;
      run.loglik = state.loglik;
      run.iterations = t;
      return run;
    }
    const double delta = (*next - state.eta).norm();
    state = e_step(Y, *next, weights, sigma2);
    run.iterations = t + 1;
    if (config.record_trace) run.loglik_trace.push_back(state.loglik);
    if (delta < tolerance || delta == 0.0) {
      run.converged = true;
      break;
    }
  }
  run.eta = std::move(state.eta);
  run.loglik = state.loglik;
  return run;
}

namespace {

EmResult run_em_joint(const ComplexMatrix& Y, const RealVector& weights, double sigma2,
                      const EmConfig& config) {
  EmResult result;
  result.loglik = kNegInf;
  const int components = static_cast<int>(weights.size());
  const int attempts = config.init == InitMethod::provided ? 1 : config.restarts;

  for (int r = 0; r < attempts; ++r) {
    const ComplexMatrix eta0 = config.init == InitMethod::provided
                                   ? *config.initial_modes
                                   : kmeanspp_init(Y, components, derive_seed(config.seed, {static_cast<std::uint64_t>(r)}));
    EmRun run = run_em_from(Y, eta0, weights, sigma2, config);
    if (!run.collapsed) {
      ++result.restarts_ok;
      if (result.best_restart < 0 || run.loglik > result.loglik) {
        result.best_restart = r;
        result.loglik = run.loglik;
        result.iterations = run.iterations;
        result.eta = run.eta;
      }
    }
    if (config.record_trace) result.runs.push_back(std::move(run));
  }
  result.failed = result.best_restart < 0;
  return result;
}

}  // namespace

EmResult run_em(const ComplexMatrix& Y, const RealVector& weights, double sigma2,
                const EmConfig& config) {
  config.validate();
  if (Y.rows() < 1 || Y.cols() < 1) throw InputShapeError("observation window is empty");
  if (config.init == InitMethod::provided &&
      (config.initial_modes->rows() != Y.rows() || config.initial_modes->cols() != weights.size())) {
    throw InputShapeError("initial_modes must be N_r x (number of weights)");
  }
  if (!(sigma2 > 0.0)) throw DomainError("EM requires sigma2 > 0");

  if (config.coupling == AntennaCoupling::joint) return run_em_joint(Y, weights, sigma2, config);

  // Independent per-antenna EM; antenna 0 keeps the caller's seed.
  EmResult combined;
  combined.eta.resize(Y.rows(), weights.size());
  combined.loglik = 0.0;
  combined.restarts_ok = std::numeric_limits<int>::max();
  for (Eigen::Index l = 0; l < Y.rows(); ++l) {
    EmConfig sub = config;
    sub.coupling = AntennaCoupling::joint;
    if (l > 0) sub.seed = derive_seed(config.seed, {0xa7e11aULL, static_cast<std::uint64_t>(l)});
    if (config.initial_modes) sub.initial_modes = ComplexMatrix(config.initial_modes->row(l));
    EmResult part = run_em_joint(Y.row(l), weights, sigma2, sub);
    combined.restarts_ok = std::min(combined.restarts_ok, part.restarts_ok);
    if (part.failed) {
      combined.failed = true;
      continue;
    }
    combined.eta.row(l) = part.eta.row(0);
    combined.loglik += part.loglik;
    combined.iterations = std::max(combined.iterations, part.iterations);
    if (l == 0) combined.best_restart = part.best_restart;
    for (auto& run : part.runs) combined.runs.push_back(std::move(run));
  }
  if (combined.failed) combined.loglik = kNegInf;
  return combined;
}

}  // namespace adsbrange
