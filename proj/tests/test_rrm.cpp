#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "d2dsim/rrm.hpp"
#include "d2dsim/units.hpp"

using namespace d2dsim;

namespace {

struct Instance {
  ChannelGainSet gains;
  LinkPowers powers;
  double sigma2 = 1e-13;
};

Instance random_instance(Rng& rng, std::size_t N, std::size_t M) {
  std::uniform_real_distribution<double> g(-120.0, -70.0), p(-10.0, 24.0);
  Instance s;
  s.gains.h_cross = Matrix<double>(N, M);
  for (std::size_t n = 0; n < M; ++n) {
    s.gains.h_cell.push_back(db_to_linear(g(rng)));
    s.powers.cell.push_back(dbm_to_watts(p(rng)));
  }
  for (std::size_t m = 0; m < N; ++m) {
    s.gains.h_d2d.push_back(db_to_linear(g(rng) + 20));
    s.gains.h_d2d_to_bs.push_back(db_to_linear(g(rng)));
    s.powers.d2d.push_back(dbm_to_watts(p(rng)));
    for (std::size_t n = 0; n < M; ++n) s.gains.h_cross(m, n) = db_to_linear(g(rng));
  }
  return s;
}

double cellular_sum(const Instance& s, const Allocation& a) {
  std::vector<int> reuse(s.gains.cellular_count(), -1);
  for (std::size_t m = 0; m < a.pair_to_resource.size(); ++m)
    if (a.pair_to_resource[m] >= 0) reuse[static_cast<std::size_t>(a.pair_to_resource[m])] = static_cast<int>(m);
  double total = 0.0;
  for (std::size_t n = 0; n < reuse.size(); ++n) {
    const double signal = s.gains.h_cell[n] * s.powers.cell[n];
    const double interference = reuse[n] < 0 ? 0.0 : s.gains.h_d2d_to_bs[static_cast<std::size_t>(reuse[n])] * s.powers.d2d[static_cast<std::size_t>(reuse[n])];
    total += std::log2(1.0 + signal / (interference + s.sigma2));
  }
  return total;
}

}  // namespace

TEST(Rrm, SchemeNames) {
  for (Scheme s : kAllSchemes) EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  EXPECT_FALSE(parse_scheme("greedy"));
}

TEST(Rrm, ProposedRespectsFeasibility) {
  Rng rng(1);
  for (int it = 0; it < 200; ++it) {
    const std::size_t N = rng() % 8, M = rng() % 8;
    FeasibilityMatrix f{FeasibilityMode::Context, Matrix<std::uint8_t>(N, M)};
    for (std::size_t m = 0; m < N; ++m)
      for (std::size_t n = 0; n < M; ++n) f.entries(m, n) = uniform_unit(rng) < 0.3;
    const Allocation a = allocate_proposed(f);
    EXPECT_EQ(a.scheme, Scheme::Proposed);
    EXPECT_TRUE(a.injective());
    for (std::size_t m = 0; m < N; ++m)
      if (a.pair_to_resource[m] >= 0) EXPECT_TRUE(f(m, static_cast<std::size_t>(a.pair_to_resource[m])));
  }
}

TEST(Rrm, CapacityMaxUsesEveryResource) {
  Rng rng(2);
  const Instance s = random_instance(rng, 3, 5);
  const Allocation a = allocate_capacity_max(s.gains, s.powers, s.sigma2);
  EXPECT_EQ(a.assigned(), 3u);
  EXPECT_EQ(a.overflow, 0u);
  EXPECT_TRUE(a.injective());
  const Instance big = random_instance(rng, 7, 4);
  const Allocation b = allocate_capacity_max(big.gains, big.powers, big.sigma2);
  EXPECT_EQ(b.assigned(), 4u);
  EXPECT_EQ(b.overflow, 3u);
}

TEST(Rrm, CapacityMaxBeatsEveryRandomDraw) {
  Rng rng(3);
  for (int it = 0; it < 100; ++it) {
    const std::size_t N = 1 + rng() % 6, M = 1 + rng() % 6;
    const Instance s = random_instance(rng, N, M);
    const double best = cellular_sum(s, allocate_capacity_max(s.gains, s.powers, s.sigma2));
    for (int k = 0; k < 20; ++k) {
      Rng r = substream(static_cast<std::uint64_t>(it), "random-allocation", static_cast<std::uint64_t>(k));
      EXPECT_GE(best + 1e-9, cellular_sum(s, allocate_random(N, M, r)));
    }
  }
}

TEST(Rrm, CapacityWeightsMatchDefinition) {
  Rng rng(4);
  const Instance s = random_instance(rng, 3, 4);
  const Matrix<double> w = cellular_capacity_weights(s.gains, s.powers, s.sigma2);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      const double signal = s.gains.h_cell[n] * s.powers.cell[n];
      const double with = std::log2(1 + signal / (s.gains.h_d2d_to_bs[m] * s.powers.d2d[m] + s.sigma2));
      const double without = std::log2(1 + signal / s.sigma2);
      EXPECT_NEAR(w(m, n), with - without, 1e-12);
    }
  }
}

TEST(Rrm, RandomIsUniformOverBijections) {
  std::map<std::vector<int>, int> counts;
  const int draws = 6000;
  for (int s = 0; s < draws; ++s) {
    Rng rng = substream(static_cast<std::uint64_t>(s), "random-allocation");
    ++counts[allocate_random(3, 3, rng).pair_to_resource];
  }
  ASSERT_EQ(counts.size(), 6u);
  double chi2 = 0.0;
  const double expect = draws / 6.0;
  for (const auto& [perm, c] : counts) {
    chi2 += (c - expect) * (c - expect) / expect;
    EXPECT_NEAR(c, expect, 3.0 * std::sqrt(draws * (1.0 / 6) * (5.0 / 6)));
  }
  EXPECT_LT(chi2, 20.52);  // 5 dof, p = 0.001
}

TEST(Rrm, RandomIsDeterministicPerSeed) {
  Rng a = substream(9, "random-allocation", 2);
  Rng b = substream(9, "random-allocation", 2);
  EXPECT_EQ(allocate_random(5, 4, a).pair_to_resource, allocate_random(5, 4, b).pair_to_resource);
  Rng c = substream(9, "random-allocation");
  EXPECT_EQ(allocate_random(0, 4, c).assigned(), 0u);
  Rng d = substream(9, "random-allocation");
  const Allocation x = allocate_random(5, 3, d);
  EXPECT_EQ(x.assigned(), 3u);
  EXPECT_EQ(x.overflow, 2u);
  EXPECT_TRUE(x.injective());
}

TEST(Rrm, NoneIsEmpty) {
  const Allocation a = allocate_none(4);
  EXPECT_EQ(a.scheme, Scheme::None);
  EXPECT_EQ(a.assigned(), 0u);
  EXPECT_EQ(a.pair_to_resource.size(), 4u);
}
