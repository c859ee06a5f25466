#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "d2dsim/matrix.hpp"

namespace d2dsim {

/// Bipartite graph given as an N x M 0/1 matrix; rows are D2D pairs and
/// columns cellular resources. Results map each row to a column or -1.
struct MatchingResult {
  std::vector<int> row_to_col;
  std::size_t size = 0;
};

/// Maximum-cardinality matching by repeated augmenting-path search.
MatchingResult max_cardinality_matching(const Matrix<std::uint8_t>& adjacency);

/// Among all maximum-cardinality matchings, the one whose row_to_col vector
/// is lexicographically smallest (an unmatched row compares greater than any
/// column).
MatchingResult lexicographic_max_matching(const Matrix<std::uint8_t>& adjacency);

/// Exhaustive search for N, M <= 8. Returns the size and the
/// lexicographically smallest maximum witness. Throws std::invalid_argument
/// above the size guard.
MatchingResult brute_force_max_matching(const Matrix<std::uint8_t>& adjacency);

}  // namespace d2dsim
