#include "adsbrange/reorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "adsbrange/assignment.hpp"
#include "adsbrange/errors.hpp"

namespace adsbrange {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxPermutationK = 4;

std::size_t mode_count(int K) { return (std::size_t{1} << K) - 1; }

void check_input(const ComplexVector& eta_i, int K) {
  if (K < 1) throw DomainError("K must be >= 1");
  if (K > kMaxPermutationK) {
    throw CapabilityError("permutation-based reordering supports K <= 4; use a subset method");
  }
  if (static_cast<std::size_t>(eta_i.size()) != mode_count(K)) {
    throw InputShapeError("expected 2^K - 1 = " + std::to_string(mode_count(K)) + " modes");
  }
}

double wrapped_arg(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  return a;
}

// Calls visit(indices) for every l-combination of {0..n-1} in lexicographic
// order.
template <typename Visit>
void for_each_combination(int n, int l, Visit&& visit) {
  if (l > n || l < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(l));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(idx);
    int i = l - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - l + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < l; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

bool strictly_ordered(const ComplexVector& phi) {
  for (Eigen::Index k = 1; k < phi.size(); ++k) {
    if (!(std::abs(phi(k - 1)) > std::abs(phi(k)))) return false;
  }
  return true;
}

RealMatrix normal_solver(const RealMatrix& A) {
  // (A^T A)^{-1} A^T; A^T A is symmetric positive definite for these A.
  return (A.transpose() * A).llt().solve(A.transpose());
}

}  // namespace

std::string_view to_string(ReorderMethod method) {
  switch (method) {
    case ReorderMethod::ls_constrained: return "ls_constrained";
    case ReorderMethod::ls_unconstrained: return "ls_unconstrained";
    case ReorderMethod::subset_k4: return "subset_k4";
    case ReorderMethod::subset_k4_literal: return "subset_k4_literal";
    case ReorderMethod::weighted_k4: return "weighted_k4";
  }
  return "unknown";
}

ReorderMethod parse_reorder_method(std::string_view name) {
  for (auto m : {ReorderMethod::ls_constrained, ReorderMethod::ls_unconstrained,
                 ReorderMethod::subset_k4, ReorderMethod::subset_k4_literal,
                 ReorderMethod::weighted_k4}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigurationError("unknown reorder method '" + std::string(name) + "'");
}

RealMatrix structure_matrix(int K) {
  if (K < 1 || K > 20) throw DomainError("K must be in [1, 20]");
  RealMatrix A = RealMatrix::Zero(static_cast<Eigen::Index>(mode_count(K)), K);
  Eigen::Index row = 0;
  for (int size = 1; size <= K; ++size) {
    for_each_combination(K, size, [&](const std::vector<int>& cols) {
      for (int c : cols) A(row, c) = 1.0;
      ++row;
    });
  }
  return A;
}

std::vector<std::size_t> magnitude_order(const ComplexVector& values) {
  std::vector<std::size_t> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Complex a = values(static_cast<Eigen::Index>(i));
    const Complex b = values(static_cast<Eigen::Index>(j));
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max(ma, mb)) return ma > mb;
    return wrapped_arg(a) < wrapped_arg(b);
  });
  return order;
}

std::size_t find_zero_mode(const ComplexVector& eta) {
  if (eta.size() == 0) throw InputShapeError("empty mode vector");
  std::size_t best = 0;
  double best_mag = std::abs(eta(0));
  for (Eigen::Index a = 1; a < eta.size(); ++a) {
    const double mag = std::abs(eta(a));
    if (mag < best_mag) {
      best_mag = mag;
      best = static_cast<std::size_t>(a);
    }
  }
  return best;
}

ComplexVector remove_mode(const ComplexVector& eta, std::size_t i) {
  if (i >= static_cast<std::size_t>(eta.size())) throw DomainError("mode index out of range");
  ComplexVector out(eta.size() - 1);
  Eigen::Index w = 0;
  for (Eigen::Index a = 0; a < eta.size(); ++a) {
    if (static_cast<std::size_t>(a) != i) out(w++) = eta(a);
  }
  return out;
}

ReorderResult reorder_ls_constrained(const ComplexVector& eta_i, int K) {
  check_input(eta_i, K);
  const Eigen::MatrixXcd Ac = structure_matrix(K).cast<Complex>();
  const Eigen::Index L = eta_i.size();
  const auto order = magnitude_order(eta_i);

  ReorderResult result;
  result.method = ReorderMethod::ls_constrained;
  double best = kInf;
  ComplexVector phi(K);
  RealMatrix cost(L, L);

  for_each_combination(static_cast<int>(L), K, [&](const std::vector<int>& pick) {
    for (int k = 0; k < K; ++k) phi(k) = eta_i(static_cast<Eigen::Index>(order[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])]));
    const ComplexVector predicted = Ac * phi;
    for (Eigen::Index r = 0; r < L; ++r) {
      for (Eigen::Index j = 0; j < L; ++j) cost(r, j) = std::norm(predicted(r) - eta_i(j));
    }
    const Assignment match = solve_assignment(cost);
    ++result.candidates;
    if (match.cost < best) {
      best = match.cost;
      result.h = phi;
    }
  });
  result.residual = std::sqrt(std::max(best, 0.0));
  return result;
}

ReorderResult reorder_ls_unconstrained(const ComplexVector& eta_i, int K) {
  check_input(eta_i, K);
  const RealMatrix A = structure_matrix(K);
  const Eigen::MatrixXcd Ac = A.cast<Complex>();
  const Eigen::MatrixXcd G = normal_solver(A).cast<Complex>();
  const Eigen::Index L = eta_i.size();

  ReorderResult result;
  result.method = ReorderMethod::ls_unconstrained;
  double best = kInf;
  ComplexVector x(L);

  auto consider = [&](const ComplexVector& arranged) {
    const ComplexVector phi = G * arranged;
    const double residual = (Ac * phi - arranged).norm();
    ++result.candidates;
    if (strictly_ordered(phi) && residual < best) {
      best = residual;
      result.h = phi;
    }
  };

  if (K <= 3) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(L));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    do {
      for (Eigen::Index r = 0; r < L; ++r) x(r) = eta_i(perm[static_cast<std::size_t>(r)]);
      consider(x);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Alternate between the optimal assignment for a fixed Phi and the
    // closed-form Phi for a fixed assignment, from every ordered 4-subset.
    result.exhaustive = false;
    const auto order = magnitude_order(eta_i);
    RealMatrix cost(L, L);
    ComplexVector phi(K);
    for_each_combination(static_cast<int>(L), K, [&](const std::vector<int>& pick) {
      for (int k = 0; k < K; ++k) phi(k) = eta_i(static_cast<Eigen::Index>(order[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])]));
      std::vector<int> previous;
      for (int iter = 0; iter < 50; ++iter) {
        const ComplexVector predicted = Ac * phi;
        for (Eigen::Index r = 0; r < L; ++r) {
          for (Eigen::Index j = 0; j < L; ++j) cost(r, j) = std::norm(predicted(r) - eta_i(j));
        }
        const Assignment match = solve_assignment(cost);
        if (match.column_of_row == previous) break;
        previous = match.column_of_row;
        for (Eigen::Index r = 0; r < L; ++r) x(r) = eta_i(match.column_of_row[static_cast<std::size_t>(r)]);
        consider(x);
        phi = G * x;
      }
    });
  }

  if (!std::isfinite(best)) {
    ReorderResult fallback = reorder_ls_constrained(eta_i, K);
    fallback.method = ReorderMethod::ls_unconstrained;
    fallback.fallback = true;
    fallback.exhaustive = result.exhaustive;
    fallback.candidates += result.candidates;
    return fallback;
  }
  result.residual = best;
  return result;
}

ReorderResult reorder_subset_k4(const ComplexVector& eta_i, bool literal) {
  if (eta_i.size() != 15) throw InputShapeError("subset reordering needs the 15 non-zero modes of K = 4");
  const auto order = magnitude_order(eta_i);
  auto at = [&](int pos) { return eta_i(static_cast<Eigen::Index>(order[static_cast<std::size_t>(pos)])); };

  ReorderResult result;
  result.method = literal ? ReorderMethod::subset_k4_literal : ReorderMethod::subset_k4;
  result.h.resize(4);
  double best = kInf;

  if (literal) {
    for_each_combination(15, 5, [&](const std::vector<int>& pick) {
      const Complex v = at(pick[0]) + at(pick[1]) + at(pick[2]) + at(pick[3]) - at(pick[4]);
      ++result.candidates;
      const double score = std::abs(v);
      if (score < best) {
        best = score;
        for (int k = 0; k < 4; ++k) result.h(k) = at(pick[static_cast<std::size_t>(k)]);
      }
    });
  } else {
    for_each_combination(15, 4, [&](const std::vector<int>& pick) {
      const Complex sum = at(pick[0]) + at(pick[1]) + at(pick[2]) + at(pick[3]);
      for (int c = 0; c < 15; ++c) {
        if (std::find(pick.begin(), pick.end(), c) != pick.end()) continue;
        ++result.candidates;
        const double score = std::abs(sum - at(c));
        if (score < best) {
          best = score;
          for (int k = 0; k < 4; ++k) result.h(k) = at(pick[static_cast<std::size_t>(k)]);
        }
      }
    });
  }
  result.residual = best;
  return result;
}

ReorderResult reorder_weighted_k4(const ComplexVector& eta_i) {
  if (eta_i.size() != 15) throw InputShapeError("weighted reordering needs the 15 non-zero modes of K = 4");
  const auto order = magnitude_order(eta_i);
  auto at = [&](int pos) { return eta_i(static_cast<Eigen::Index>(order[static_cast<std::size_t>(pos)])); };
  const Complex total = eta_i.sum();

  ReorderResult result;
  result.method = ReorderMethod::weighted_k4;
  result.h.resize(4);
  double best = kInf;
  for_each_combination(15, 4, [&](const std::vector<int>& pick) {
    const Complex sum = at(pick[0]) + at(pick[1]) + at(pick[2]) + at(pick[3]);
    const Complex rest = total - sum;
    ++result.candidates;
    const double score = std::abs(7.0 * sum - rest);
    if (score < best) {
      best = score;
      for (int k = 0; k < 4; ++k) result.h(k) = at(pick[static_cast<std::size_t>(k)]);
    }
  });
  result.residual = best;
  return result;
}

ReorderResult reorder(const ComplexVector& eta_hat, int K, ReorderMethod method) {
  if (K < 1 || K > 20) throw DomainError("K must be in [1, 20]");
  if (static_cast<std::size_t>(eta_hat.size()) != (std::size_t{1} << K)) {
    throw InputShapeError("expected 2^K modes");
  }
  const std::size_t zero = find_zero_mode(eta_hat);
  const ComplexVector eta_i = remove_mode(eta_hat, zero);
  ReorderResult result;
  switch (method) {
    case ReorderMethod::ls_constrained: result = reorder_ls_constrained(eta_i, K); break;
    case ReorderMethod::ls_unconstrained: result = reorder_ls_unconstrained(eta_i, K); break;
    case ReorderMethod::subset_k4:
    case ReorderMethod::subset_k4_literal:
      if (K != 4) throw CapabilityError("subset reordering is defined for K = 4 only");
      result = reorder_subset_k4(eta_i, method == ReorderMethod::subset_k4_literal);
      break;
    case ReorderMethod::weighted_k4:
      if (K != 4) throw CapabilityError("weighted reordering is defined for K = 4 only");
      result = reorder_weighted_k4(eta_i);
      break;
  }
  result.zero_index = zero;
  return result;
}

}  // namespace adsbrange
