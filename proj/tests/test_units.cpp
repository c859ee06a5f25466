#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "d2dsim/geometry.hpp"
#include "d2dsim/random.hpp"
#include "d2dsim/units.hpp"

using namespace d2dsim;

TEST(Units, DbRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> db(-200.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = db(rng);
    const double lin = db_to_linear(x);
    EXPECT_NEAR(db_to_linear(linear_to_db(lin)), lin, 1e-12 * lin);
    EXPECT_NEAR(watts_to_dbm(dbm_to_watts(x)), x, 1e-9);
  }
}

TEST(Units, KnownValues) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(24.0), 0.2511886, 1e-7);
  EXPECT_DOUBLE_EQ(db_to_linear(10.0), 10.0);
}

TEST(Geometry, SegmentThroughBox) {
  const Rect box{10, 10, 20, 20};
  EXPECT_TRUE(segment_hits_box({0, 15, 1.5}, {30, 15, 1.5}, box, 30.0));
  EXPECT_FALSE(segment_hits_box({0, 5, 1.5}, {30, 5, 1.5}, box, 30.0));
  // passes over the roof
  EXPECT_FALSE(segment_hits_box({0, 15, 40}, {30, 15, 40}, box, 30.0));
  // descends from a mast into the box
  EXPECT_TRUE(segment_hits_box({0, 15, 60}, {15, 15, 1.5}, box, 30.0));
  // ends before reaching it
  EXPECT_FALSE(segment_hits_box({0, 15, 1.5}, {9, 15, 1.5}, box, 30.0));
}

TEST(Random, SubstreamsAreLabeled) {
  Rng a = substream(5, "users");
  Rng b = substream(5, "users");
  Rng c = substream(5, "shadowing");
  Rng d = substream(6, "users");
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  EXPECT_NE(substream(5, "sector", 0)(), substream(5, "sector", 1)());
}

TEST(Random, KeyedNormalMoments) {
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = keyed_normal(mix(99, static_cast<std::uint64_t>(i)));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 1.0, 0.01);
}
