#include <gtest/gtest.h>

#include <cmath>

#include "d2dsim/channel.hpp"
#include "d2dsim/power.hpp"
#include "d2dsim/units.hpp"

using namespace d2dsim;

TEST(Power, ClosedFormExample) {
  const PowerAssignment p = open_loop_power(10.0, 1e-9, 4e-15, 24.0);
  EXPECT_NEAR(p.tx_power_w, 4e-5, 1e-15);
  EXPECT_FALSE(p.clipped);
  EXPECT_DOUBLE_EQ(p.snr_target_db, 10.0);
}

TEST(Power, ClipsAtMaximum) {
  const PowerAssignment p = open_loop_power(60.0, 1e-12, 4e-15, 24.0);
  EXPECT_TRUE(p.clipped);
  EXPECT_NEAR(watts_to_dbm(p.tx_power_w), 24.0, 1e-12);
}

TEST(Power, UnreachableTarget) { EXPECT_THROW(open_loop_power(10.0, 0.0, 4e-15, 24.0), ModelError); }

TEST(Power, UnclippedHitsTarget) {
  Rng rng(3);
  std::uniform_real_distribution<double> t(-5.0, 20.0), g(-140.0, -50.0), s(-135.0, -100.0);
  for (int i = 0; i < 10000; ++i) {
    const double target = t(rng), gain = db_to_linear(g(rng)), sigma2 = dbm_to_watts(s(rng));
    const PowerAssignment p = open_loop_power(target, gain, sigma2, 24.0);
    EXPECT_GT(p.tx_power_w, 0.0);
    EXPECT_LE(p.tx_power_w, dbm_to_watts(24.0) * (1 + 1e-12));
    const bool over = sigma2 * db_to_linear(target) / gain > dbm_to_watts(24.0);
    EXPECT_EQ(p.clipped, over);
    if (!p.clipped) {
      const double snr = gain * p.tx_power_w / sigma2;
      EXPECT_NEAR(snr, db_to_linear(target), 1e-9 * db_to_linear(target));
    }
  }
}

TEST(Power, TargetsUniformOnInterval) {
  Rng rng = substream(1, "snr");
  const auto v = draw_snr_targets({7.0, 12.0}, 100000, rng);
  double sum = 0.0;
  for (double x : v) {
    EXPECT_GE(x, 7.0);
    EXPECT_LE(x, 12.0);
    sum += x;
  }
  EXPECT_NEAR(sum / static_cast<double>(v.size()), 9.5, 0.02);
}
