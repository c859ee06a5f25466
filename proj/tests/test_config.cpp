#include <gtest/gtest.h>

#include "d2dsim/config.hpp"

using namespace d2dsim;

namespace {

ConfigError parse_error(const std::string& text) {
  try {
    validate_config(parse_config(text));
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for " << text;
  return ConfigError("", "");
}

}  // namespace

TEST(Config, DefaultsAreValid) {
  const ScenarioConfig cfg = default_config();
  EXPECT_NO_THROW(validate_config(cfg));
  EXPECT_DOUBLE_EQ(cfg.grid.width_m, 387.0);
  EXPECT_DOUBLE_EQ(cfg.grid.height_m, 552.0);
  EXPECT_DOUBLE_EQ(cfg.users.density_per_km2, 1000.0);
  EXPECT_DOUBLE_EQ(cfg.users.max_tx_power_dbm, 24.0);
  EXPECT_DOUBLE_EQ(cfg.users.height_m, 1.5);
  EXPECT_DOUBLE_EQ(cfg.macro.carrier_hz, 800e6);
  EXPECT_DOUBLE_EQ(cfg.macro.bandwidth_hz, 10e6);
  EXPECT_EQ(cfg.macro.sectors, 3);
  EXPECT_DOUBLE_EQ(cfg.micro.carrier_hz, 2.6e9);
  EXPECT_DOUBLE_EQ(cfg.micro.bandwidth_hz, 40e6);
  EXPECT_EQ(cfg.micro.sectors, 2);
  EXPECT_FALSE(cfg.micro.enabled);
  EXPECT_DOUBLE_EQ(cfg.snr_targets.cellular_db.lower, 10.0);
  EXPECT_DOUBLE_EQ(cfg.snr_targets.cellular_db.upper, 15.0);
  EXPECT_DOUBLE_EQ(cfg.snr_targets.d2d_db.lower, 0.0);
  EXPECT_DOUBLE_EQ(cfg.snr_targets.d2d_db.upper, 10.0);
  EXPECT_DOUBLE_EQ(cfg.snr_targets.d2d_scheme2_db.lower, 7.0);
  EXPECT_DOUBLE_EQ(cfg.snr_targets.d2d_scheme2_db.upper, 12.0);
  EXPECT_DOUBLE_EQ(cfg.rrm.distance_ratio, 1.0);
  EXPECT_EQ(cfg.grid.floors_min, 8);
  EXPECT_EQ(cfg.grid.floors_max, 15);
}

TEST(Config, PartialOverride) {
  const ScenarioConfig cfg = parse_config(R"({"users": {"d2d_fraction": 0.25}, "drops": 7, "seed": 42})");
  EXPECT_DOUBLE_EQ(cfg.users.d2d_fraction, 0.25);
  EXPECT_EQ(cfg.drops, 7);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_DOUBLE_EQ(cfg.users.density_per_km2, 1000.0);
}

TEST(Config, UnknownKeyNamed) {
  const ConfigError e = parse_error(R"({"users": {"densty_per_km2": 5}})");
  EXPECT_EQ(e.key(), "users.densty_per_km2");
}

TEST(Config, WrongTypeNamed) {
  EXPECT_EQ(parse_error(R"({"macro": {"sectors": "three"}})").key(), "macro.sectors");
  EXPECT_EQ(parse_error(R"({"seed": -4})").key(), "seed");
}

TEST(Config, SyntaxErrorReportsLine) {
  const ConfigError e = parse_error("{\n  \"drops\": 3,\n  \"seed\": ,\n}");
  EXPECT_EQ(e.line(), 3);
}

TEST(Config, RangeChecks) {
  EXPECT_EQ(parse_error(R"({"users": {"d2d_fraction": 1.5}})").key(), "users.d2d_fraction");
  EXPECT_EQ(parse_error(R"({"users": {"density_per_km2": -1}})").key(), "users.density_per_km2");
  EXPECT_EQ(parse_error(R"({"snr_targets": {"d2d_db": [10, 0]}})").key(), "snr_targets.d2d_db");
  EXPECT_EQ(parse_error(R"({"rrm": {"gamma_cell_db": -1}})").key(), "rrm.gamma_cell_db");
  EXPECT_EQ(parse_error(R"({"rrm": {"distance_ratio": 0}})").key(), "rrm.distance_ratio");
  EXPECT_EQ(parse_error(R"({"drops": 0})").key(), "drops");
  EXPECT_EQ(parse_error(R"({"macro": {"azimuths_deg": [0, 120]}})").key(), "macro.azimuths_deg");
  EXPECT_EQ(parse_error(R"({"signaling": {"discovery_model": "C"}})").key(), "signaling.discovery_model");
}
