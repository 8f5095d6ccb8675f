#pragma once

// Resolving the order ambiguity of the EM modes.
//
// After removing the mode closest to the origin (the all-zero component),
// the remaining 2^K - 1 modes must be matched to the rows of the structure
// matrix A, whose rows are the non-zero binary K-vectors. Each method returns
// the K singleton modes h_1..h_K in decreasing magnitude.

#include <cstddef>
#include <string_view>
#include <vector>

#include "adsbrange/types.hpp"

namespace adsbrange {

enum class ReorderMethod {
  ls_constrained,    // Phi restricted to ordered K-subsets of the modes
  ls_unconstrained,  // closed-form Phi for every permutation
  subset_k4,         // four singletons plus the mode equal to their sum
  subset_k4_literal, // ordered 5-subsets, smallest element negated
  weighted_k4,       // |7 * sum(Phi) - sum(rest)|
};

std::string_view to_string(ReorderMethod method);
ReorderMethod parse_reorder_method(std::string_view name);

struct ReorderResult {
  ComplexVector h;  // K singleton modes, |h_1| > ... > |h_K|
  double residual = 0.0;
  ReorderMethod method = ReorderMethod::ls_constrained;
  std::size_t zero_index = 0;  // set by reorder()
  std::size_t candidates = 0;  // number of candidate assignments scored
  bool fallback = false;       // unconstrained LS found no magnitude-ordered solution
  bool exhaustive = true;      // false when a local search stood in for enumeration
};

/// (2^K - 1) x K binary matrix: e_1..e_K, then pairs e_1+e_2, e_1+e_3, ...,
/// then triples, ..., ending with the all-ones row.
RealMatrix structure_matrix(int K);

/// Indices of `values` sorted by decreasing magnitude. Magnitudes equal to
/// 1e-12 relative are ordered by ascending phase in [0, 2pi).
std::vector<std::size_t> magnitude_order(const ComplexVector& values);

/// argmin |eta_a|, lowest index on ties.
std::size_t find_zero_mode(const ComplexVector& eta);

/// eta with entry i removed.
ComplexVector remove_mode(const ComplexVector& eta, std::size_t i);

/// Requires 1 <= K <= 4 (CapabilityError otherwise) and 2^K - 1 inputs.
ReorderResult reorder_ls_constrained(const ComplexVector& eta_i, int K);

/// Requires 1 <= K <= 4. K <= 3 enumerates every permutation; K = 4 runs an
/// alternating assignment search from every ordered 4-subset.
ReorderResult reorder_ls_unconstrained(const ComplexVector& eta_i, int K);

/// Requires 15 inputs. `literal` selects the ordered 5-subset form.
ReorderResult reorder_subset_k4(const ComplexVector& eta_i, bool literal = false);

/// Requires 15 inputs.
ReorderResult reorder_weighted_k4(const ComplexVector& eta_i);

/// Zero-mode removal followed by the selected method on a full 2^K vector.
ReorderResult reorder(const ComplexVector& eta_hat, int K, ReorderMethod method);

}  // namespace adsbrange
