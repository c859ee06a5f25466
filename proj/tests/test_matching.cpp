#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "d2dsim/assignment.hpp"
#include "d2dsim/matching.hpp"
#include "d2dsim/random.hpp"

using namespace d2dsim;

namespace {

Matrix<std::uint8_t> random_graph(Rng& rng, std::size_t n, std::size_t m, double density) {
  Matrix<std::uint8_t> a(n, m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) a(r, c) = uniform_unit(rng) < density;
  return a;
}

bool valid_matching(const Matrix<std::uint8_t>& a, const MatchingResult& r) {
  std::vector<char> used(a.cols(), 0);
  std::size_t size = 0;
  for (std::size_t row = 0; row < a.rows(); ++row) {
    const int c = r.row_to_col[row];
    if (c < 0) continue;
    if (!a(row, static_cast<std::size_t>(c)) || used[static_cast<std::size_t>(c)]) return false;
    used[static_cast<std::size_t>(c)] = 1;
    ++size;
  }
  return size == r.size;
}

// Every permutation of a padded column list, the reference for small cases.
double permutation_max(const Matrix<double>& w) {
  const std::size_t n = w.rows(), m = w.cols();
  std::vector<int> cols(std::max(n, m));
  std::iota(cols.begin(), cols.end(), 0);
  double best = -1e300;
  do {
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (cols[r] < static_cast<int>(m)) {
        total += w(r, static_cast<std::size_t>(cols[r]));
        ++used;
      }
    }
    if (used == std::min(n, m)) best = std::max(best, total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

}  // namespace

TEST(Matching, Identity) {
  Matrix<std::uint8_t> a(2, 2, 0);
  a(0, 0) = a(1, 1) = 1;
  const auto r = lexicographic_max_matching(a);
  EXPECT_EQ(r.size, 2u);
  EXPECT_EQ(r.row_to_col, (std::vector<int>{0, 1}));
  Matrix<std::uint8_t> b(3, 3, 0);
  for (int i = 0; i < 3; ++i) b(i, i) = 1;
  EXPECT_EQ(brute_force_max_matching(b).size, 3u);
}

TEST(Matching, Empty) {
  const auto r = lexicographic_max_matching(Matrix<std::uint8_t>(3, 4, 0));
  EXPECT_EQ(r.size, 0u);
  EXPECT_EQ(r.row_to_col, (std::vector<int>{-1, -1, -1}));
  EXPECT_EQ(lexicographic_max_matching(Matrix<std::uint8_t>(0, 4)).size, 0u);
  EXPECT_EQ(lexicographic_max_matching(Matrix<std::uint8_t>(3, 0)).size, 0u);
}

TEST(Matching, HandCheckable) {
  Matrix<std::uint8_t> a(2, 2, 1);
  a(1, 1) = 0;
  const auto bf = brute_force_max_matching(a);
  EXPECT_EQ(bf.size, 2u);
  EXPECT_EQ(bf.row_to_col, (std::vector<int>{1, 0}));
  EXPECT_EQ(lexicographic_max_matching(a).row_to_col, (std::vector<int>{1, 0}));
}

TEST(Matching, SizeGuard) { EXPECT_THROW(brute_force_max_matching(Matrix<std::uint8_t>(9, 2, 1)), std::invalid_argument); }

TEST(Matching, AgreesWithBruteForce) {
  Rng rng(21);
  for (int it = 0; it < 1000; ++it) {
    const std::size_t n = 1 + rng() % 6, m = 1 + rng() % 6;
    const auto a = random_graph(rng, n, m, 0.1 + 0.8 * uniform_unit(rng));
    const auto bf = brute_force_max_matching(a);
    const auto plain = max_cardinality_matching(a);
    const auto lex = lexicographic_max_matching(a);
    ASSERT_TRUE(valid_matching(a, plain));
    ASSERT_TRUE(valid_matching(a, lex));
    ASSERT_TRUE(valid_matching(a, bf));
    EXPECT_EQ(plain.size, bf.size);
    EXPECT_EQ(lex.size, bf.size);
    EXPECT_EQ(lex.row_to_col, bf.row_to_col);
  }
}

TEST(Matching, LargerInstancesStayValid) {
  Rng rng(22);
  for (int it = 0; it < 50; ++it) {
    const auto a = random_graph(rng, 40, 35, 0.1);
    const auto plain = max_cardinality_matching(a);
    const auto lex = lexicographic_max_matching(a);
    EXPECT_TRUE(valid_matching(a, lex));
    EXPECT_EQ(lex.size, plain.size);
  }
}

TEST(Assignment, DominantDiagonal) {
  Matrix<double> w(2, 2);
  w(0, 0) = 2;
  w(0, 1) = 1;
  w(1, 0) = 1;
  w(1, 1) = 2;
  const auto r = solve_max_assignment(w);
  EXPECT_EQ(r.row_to_col, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(r.total, 4.0);
}

TEST(Assignment, SingleEntry) {
  const auto r = solve_max_assignment(Matrix<double>(1, 1, -3.5));
  EXPECT_EQ(r.row_to_col, (std::vector<int>{0}));
  EXPECT_DOUBLE_EQ(r.total, -3.5);
}

TEST(Assignment, AgreesWithPermutations) {
  Rng rng(23);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 1 + rng() % 6, m = 1 + rng() % 6;
    Matrix<double> w(n, m);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < m; ++c) w(r, c) = u(rng);
    const double expect = permutation_max(w);
    const auto fast = solve_max_assignment(w);
    const auto slow = brute_force_max_assignment(w);
    EXPECT_NEAR(fast.total, expect, 1e-9 * std::max(1.0, std::abs(expect)));
    EXPECT_NEAR(slow.total, expect, 1e-9 * std::max(1.0, std::abs(expect)));
    double check = 0.0;
    std::vector<char> used(m, 0);
    std::size_t assigned = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const int c = fast.row_to_col[r];
      if (c < 0) continue;
      ASSERT_FALSE(used[static_cast<std::size_t>(c)]);
      used[static_cast<std::size_t>(c)] = 1;
      check += w(r, static_cast<std::size_t>(c));
      ++assigned;
    }
    EXPECT_EQ(assigned, std::min(n, m));
    EXPECT_NEAR(check, fast.total, 1e-9 * std::max(1.0, std::abs(check)));
  }
}
