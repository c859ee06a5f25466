#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dsim {

/// Raised for unparseable or invalid configuration. `key()` names the
/// offending dotted key for validation errors; `line()` is set for syntax
/// errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key, int line = 0)
      : std::runtime_error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct AntennaParams {
  double max_gain_dbi = 0.0;
  double beamwidth_deg = 65.0;     // 3 dB beamwidth
  double front_to_back_db = 20.0;  // floor of the pattern
};

/// Log-distance pathloss: intercept + slope*log10(d/1m) + freq_coeff*log10(f/1GHz).
struct PathlossCoefficients {
  double intercept_db = 0.0;
  double slope_db_per_decade = 20.0;
  double freq_coeff_db = 20.0;
};

struct LinkClassParams {
  PathlossCoefficients los;
  PathlossCoefficients nlos;
  double shadowing_los_db = 0.0;
  double shadowing_nlos_db = 0.0;
};

struct ChannelModelParams {
  LinkClassParams macro;  // UE <-> macro site
  LinkClassParams micro;  // UE <-> micro site
  LinkClassParams d2d;    // UE <-> UE
  double decorrelation_distance_m = 0.0;
  double ue_antenna_gain_dbi = 0.0;
};

struct SiteParams {
  double carrier_hz = 0.0;
  double bandwidth_hz = 0.0;
  int sectors = 3;
  double height_m = 0.0;
  double dl_tx_power_dbm = 0.0;
  double association_bias_db = 0.0;  // added to DL power when picking the serving sector
  AntennaParams antenna;
  double noise_figure_db = 5.0;
};

struct MacroParams : SiteParams {
  std::array<double, 2> position_m{};  // inside the canonical 387 x 552 grid
  std::vector<double> azimuths_deg;    // one per sector
};

struct MicroParams : SiteParams {
  bool enabled = false;
  std::vector<std::array<double, 2>> sites_m;
  std::vector<double> azimuths_deg;
};

struct GridParams {
  double width_m = 387.0;
  double height_m = 552.0;
  int floors_min = 8;
  int floors_max = 15;
  double floor_height_m = 3.5;
};

struct UserParams {
  double density_per_km2 = 1000.0;
  double d2d_fraction = 0.7;
  double max_pair_distance_m = 50.0;
  double height_m = 1.5;
  double max_tx_power_dbm = 24.0;
  double noise_figure_db = 9.0;
  std::optional<int> fixed_count_per_grid;  // replaces the Poisson count
};

struct SnrTargetParams {
  Interval cellular_db{10.0, 15.0};
  Interval d2d_db{0.0, 10.0};
  Interval d2d_scheme2_db{7.0, 12.0};
};

struct RrmParams {
  double gamma_cell_db = 10.0;
  double distance_ratio = 1.0;
};

struct SignalingParams {
  char discovery_model = 'A';
  int max_retries = 3;
};

struct ScenarioConfig {
  GridParams grid;
  UserParams users;
  MacroParams macro;
  MicroParams micro;
  ChannelModelParams channel;
  SnrTargetParams snr_targets;
  RrmParams rrm;
  double noise_density_dbm_per_hz = -174.0;
  SignalingParams signaling;
  int drops = 200;
  std::uint64_t seed = 0;
};

ScenarioConfig default_config();

/// Parses JSON text; keys absent from the text keep their defaults.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Throws ConfigError naming the first offending key.
void validate_config(const ScenarioConfig& cfg);

}  // namespace d2dsim
