#include "d2dsim/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace d2dsim {
namespace {

// Minimum-cost assignment of every row (rows <= cols). Returns row -> col.
std::vector<int> hungarian_min(const Matrix<double>& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

void enumerate(const Matrix<double>& w, std::size_t row, std::size_t remaining_cols, std::vector<int>& current,
               std::vector<char>& used, double total, AssignmentResult& best, bool& found) {
  const std::size_t rows_left = w.rows() - row;
  if (row == w.rows()) {
    if (!found || total > best.total) {
      best.total = total;
      best.row_to_col = current;
      found = true;
    }
    return;
  }
  for (std::size_t c = 0; c < w.cols(); ++c) {
    if (used[c]) continue;
    used[c] = 1;
    current[row] = static_cast<int>(c);
    enumerate(w, row + 1, remaining_cols - 1, current, used, total + w(row, c), best, found);
    used[c] = 0;
  }
  // A row may stay out only while enough rows remain to fill every column.
  if (rows_left > remaining_cols) {
    current[row] = -1;
    enumerate(w, row + 1, remaining_cols, current, used, total, best, found);
  }
}

}  // namespace

AssignmentResult solve_max_assignment(const Matrix<double>& weights) {
  AssignmentResult out;
  out.row_to_col.assign(weights.rows(), -1);
  if (weights.rows() == 0 || weights.cols() == 0) return out;

  if (weights.rows() <= weights.cols()) {
    Matrix<double> cost(weights.rows(), weights.cols());
    for (std::size_t r = 0; r < weights.rows(); ++r)
      for (std::size_t c = 0; c < weights.cols(); ++c) cost(r, c) = -weights(r, c);
    out.row_to_col = hungarian_min(cost);
  } else {
    Matrix<double> cost(weights.cols(), weights.rows());
    for (std::size_t r = 0; r < weights.rows(); ++r)
      for (std::size_t c = 0; c < weights.cols(); ++c) cost(c, r) = -weights(r, c);
    const std::vector<int> col_to_row = hungarian_min(cost);
    for (std::size_t c = 0; c < col_to_row.size(); ++c) out.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
  }
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r) {
    if (out.row_to_col[r] >= 0) out.total += weights(r, static_cast<std::size_t>(out.row_to_col[r]));
  }
  return out;
}

AssignmentResult brute_force_max_assignment(const Matrix<double>& weights) {
  if (weights.rows() > 8 || weights.cols() > 8) {
    throw std::invalid_argument("brute_force_max_assignment: dimensions above 8 are not supported");
  }
  AssignmentResult best;
  best.row_to_col.assign(weights.rows(), -1);
  std::vector<int> current(weights.rows(), -1);
  std::vector<char> used(weights.cols(), 0);
  bool found = false;
  enumerate(weights, 0, weights.cols(), current, used, 0.0, best, found);
  return best;
}

}  // namespace d2dsim
