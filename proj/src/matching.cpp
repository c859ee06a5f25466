#include "d2dsim/matching.hpp"

#include <stdexcept>

namespace d2dsim {
namespace {

class Augmenter {
 public:
  Augmenter(const Matrix<std::uint8_t>& adj, std::vector<int>& row_to_col, std::vector<int>& col_to_row)
      : adj_(adj), row_to_col_(row_to_col), col_to_row_(col_to_row), visited_(adj.cols(), 0) {}

  void reset() { std::fill(visited_.begin(), visited_.end(), 0); }

  // Augmenting path from `row`; columns owned by rows < `first_free_row` are frozen.
  bool augment(int row, int first_free_row) {
    for (std::size_t c = 0; c < adj_.cols(); ++c) {
      if (!adj_(static_cast<std::size_t>(row), c) || visited_[c]) continue;
      visited_[c] = 1;
      const int owner = col_to_row_[c];
      if (owner != -1 && owner < first_free_row) continue;
      if (owner == -1 || augment(owner, first_free_row)) {
        row_to_col_[static_cast<std::size_t>(row)] = static_cast<int>(c);
        col_to_row_[c] = row;
        return true;
      }
    }
    return false;
  }

 private:
  const Matrix<std::uint8_t>& adj_;
  std::vector<int>& row_to_col_;
  std::vector<int>& col_to_row_;
  std::vector<char> visited_;
};

std::size_t count_matched(const std::vector<int>& row_to_col) {
  std::size_t k = 0;
  for (int c : row_to_col) k += c >= 0;
  return k;
}

// Lexicographic comparison with -1 (unmatched) ranked after every column.
bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (a[i] == -1) return false;
    if (b[i] == -1) return true;
    return a[i] < b[i];
  }
  return false;
}

void enumerate(const Matrix<std::uint8_t>& adj, std::size_t row, std::vector<int>& current, std::vector<char>& used,
               std::size_t size, MatchingResult& best) {
  if (row == adj.rows()) {
    if (size > best.size || (size == best.size && lex_less(current, best.row_to_col))) {
      best.size = size;
      best.row_to_col = current;
    }
    return;
  }
  for (std::size_t c = 0; c < adj.cols(); ++c) {
    if (!adj(row, c) || used[c]) continue;
    used[c] = 1;
    current[row] = static_cast<int>(c);
    enumerate(adj, row + 1, current, used, size + 1, best);
    used[c] = 0;
  }
  current[row] = -1;
  enumerate(adj, row + 1, current, used, size, best);
}

}  // namespace

MatchingResult max_cardinality_matching(const Matrix<std::uint8_t>& adjacency) {
  std::vector<int> row_to_col(adjacency.rows(), -1);
  std::vector<int> col_to_row(adjacency.cols(), -1);
  Augmenter aug(adjacency, row_to_col, col_to_row);
  for (std::size_t r = 0; r < adjacency.rows(); ++r) {
    aug.reset();
    aug.augment(static_cast<int>(r), 0);
  }
  const std::size_t size = count_matched(row_to_col);
  return {std::move(row_to_col), size};
}

MatchingResult lexicographic_max_matching(const Matrix<std::uint8_t>& adjacency) {
  MatchingResult start = max_cardinality_matching(adjacency);
  std::vector<int> row_to_col = std::move(start.row_to_col);
  std::vector<int> col_to_row(adjacency.cols(), -1);
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    if (row_to_col[r] >= 0) col_to_row[static_cast<std::size_t>(row_to_col[r])] = static_cast<int>(r);
  }
  Augmenter aug(adjacency, row_to_col, col_to_row);

  // Fix rows one at a time to the smallest column that still admits a
  // maximum matching on the remaining rows. Invariant: the current matching
  // is maximum and agrees with all fixed rows.
  const int rows = static_cast<int>(adjacency.rows());
  for (int m = 0; m < rows; ++m) {
    for (std::size_t n = 0; n < adjacency.cols(); ++n) {
      if (!adjacency(static_cast<std::size_t>(m), n)) continue;
      const int col = static_cast<int>(n);
      if (row_to_col[static_cast<std::size_t>(m)] == col) break;
      const int owner = col_to_row[n];
      if (owner != -1 && owner < m) continue;

      const std::vector<int> saved_rows = row_to_col;
      const std::vector<int> saved_cols = col_to_row;
      const int old = row_to_col[static_cast<std::size_t>(m)];
      if (old != -1) col_to_row[static_cast<std::size_t>(old)] = -1;
      if (owner != -1) row_to_col[static_cast<std::size_t>(owner)] = -1;
      row_to_col[static_cast<std::size_t>(m)] = col;
      col_to_row[n] = m;

      if (old != -1 && owner != -1) {
        // One edge lost: some free row beyond m must re-augment.
        bool repaired = false;
        aug.reset();
        for (int r = m + 1; r < rows && !repaired; ++r) {
          if (row_to_col[static_cast<std::size_t>(r)] == -1) repaired = aug.augment(r, m + 1);
        }
        if (!repaired) {
          row_to_col = saved_rows;
          col_to_row = saved_cols;
          continue;
        }
      }
      break;
    }
  }
  const std::size_t size = count_matched(row_to_col);
  return {std::move(row_to_col), size};
}

MatchingResult brute_force_max_matching(const Matrix<std::uint8_t>& adjacency) {
  if (adjacency.rows() > 8 || adjacency.cols() > 8) {
    throw std::invalid_argument("brute_force_max_matching: dimensions above 8 are not supported");
  }
  MatchingResult best{std::vector<int>(adjacency.rows(), -1), 0};
  std::vector<int> current(adjacency.rows(), -1);
  std::vector<char> used(adjacency.cols(), 0);
  enumerate(adjacency, 0, current, used, 0, best);
  return best;
}

}  // namespace d2dsim
