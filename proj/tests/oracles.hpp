#pragma once

// Independent reference computations used only by tests. None of these call
// into the estimator code paths they are compared against.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

// Grid maximizer of p^(M+124) (1-p)^116 over (0, 1), evaluated in log form.
inline double bernoulli_grid_argmax(int M, double step) {
  double best_p = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (long i = 1;; ++i) {
    const double p = static_cast<double>(i) * step;
    if (p >= 1.0) break;
    const double v = (M + 124) * std::log(p) + 116.0 * std::log1p(-p);
    if (v > best) {
      best = v;
      best_p = p;
    }
  }
  return best_p;
}

// Subset-sum alphabet with explicit bit loops: value[a] = sum over cleared bits.
inline std::vector<cd> alphabet(const std::vector<cd>& h) {
  const std::size_t K = h.size();
  std::vector<cd> out(std::size_t{1} << K);
  for (std::size_t a = 0; a < out.size(); ++a) {
    cd s = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (!(a & (std::size_t{1} << k))) s += h[k];
    }
    out[a] = s;
  }
  return out;
}

// Binary rows of the structure matrix, generated by increasing popcount and
// then by lexicographic bit pattern of the chosen columns.
inline std::vector<std::vector<int>> structure_rows(int K) {
  std::vector<std::vector<int>> rows;
  for (int size = 1; size <= K; ++size) {
    std::vector<int> mask(static_cast<std::size_t>(K), 0);
    std::fill(mask.begin(), mask.begin() + size, 1);
    do {
      rows.push_back(mask);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return rows;
}

struct LsSolution {
  std::vector<cd> h;
  double residual = std::numeric_limits<double>::infinity();
};

// Brute-force constrained LS: every permutation of the modes against every
// magnitude-ordered K-subset. Only practical for K <= 3.
inline LsSolution constrained_ls_bruteforce(const std::vector<cd>& eta, int K) {
  const auto rows = structure_rows(K);
  const std::size_t L = eta.size();
  LsSolution best;
  std::vector<std::size_t> pick(static_cast<std::size_t>(K));
  std::vector<int> select(L, 0);
  std::fill(select.begin(), select.begin() + K, 1);
  do {
    std::vector<cd> phi;
    for (std::size_t i = 0; i < L; ++i) {
      if (select[i]) phi.push_back(eta[i]);
    }
    std::sort(phi.begin(), phi.end(), [](cd a, cd b) { return std::abs(a) > std::abs(b); });
    std::vector<cd> predicted;
    for (const auto& row : rows) {
      cd s = 0.0;
      for (int k = 0; k < K; ++k) s += static_cast<double>(row[static_cast<std::size_t>(k)]) * phi[static_cast<std::size_t>(k)];
      predicted.push_back(s);
    }
    std::vector<std::size_t> perm(L);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      double r2 = 0.0;
      for (std::size_t r = 0; r < L; ++r) r2 += std::norm(predicted[r] - eta[perm[r]]);
      if (std::sqrt(r2) < best.residual) {
        best.residual = std::sqrt(r2);
        best.h = phi;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (std::prev_permutation(select.begin(), select.end()));
  return best;
}

// Midpoint-rule integral of f over [x0, x1] x [y0, y1].
template <typename F>
double integrate_2d(F&& f, double x0, double x1, double y0, double y1, int steps) {
  const double dx = (x1 - x0) / steps;
  const double dy = (y1 - y0) / steps;
  double acc = 0.0;
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) acc += f(x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy);
  }
  return acc * dx * dy;
}

// Exact per-position zero-chip probability of a packet placed at a uniform
// delay in [0, M], averaged over random Manchester payloads.
inline std::vector<double> zero_probability_by_position(int M) {
  static const int preamble[16] = {1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0};
  const int cols = 240 + M;
  std::vector<double> p(static_cast<std::size_t>(cols), 0.0);
  for (int m = 0; m <= M; ++m) {
    for (int n = 0; n < cols; ++n) {
      const int o = n - m;
      double pz;
      if (o < 0 || o >= 240) pz = 1.0;
      else if (o < 16) pz = preamble[o] ? 0.0 : 1.0;
      else pz = 0.5;
      p[static_cast<std::size_t>(n)] += pz / (M + 1);
    }
  }
  return p;
}

}  // namespace oracle
