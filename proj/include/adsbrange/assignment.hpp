#pragma once

#include <vector>

#include "adsbrange/types.hpp"

namespace adsbrange {

struct Assignment {
  std::vector<int> column_of_row;  // row r is matched to column column_of_row[r]
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n^3)). Among equal-cost optima the result is deterministic.
Assignment solve_assignment(const RealMatrix& cost);

}  // namespace adsbrange
