#pragma once

#include <vector>

#include "d2dsim/matrix.hpp"

namespace d2dsim {

struct AssignmentResult {
  std::vector<int> row_to_col;  // -1 for rows left out when rows > cols
  double total = 0.0;
};

/// Maximum-weight linear assignment (Hungarian method, O(n^2 m)). Every row
/// gets a distinct column when rows <= cols; otherwise every column gets a
/// distinct row.
AssignmentResult solve_max_assignment(const Matrix<double>& weights);

/// Exhaustive oracle over all injective maps; rows, cols <= 8.
AssignmentResult brute_force_max_assignment(const Matrix<double>& weights);

}  // namespace d2dsim
