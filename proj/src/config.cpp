#include "d2dsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace d2dsim {
namespace {

using nlohmann::json;

// Walks one JSON object, filling fields that are present and remembering
// which keys were consumed so leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw ConfigError("expected an object at '" + name() + "'", name());
  }

  std::string key(const std::string& k) const { return prefix_.empty() ? k : prefix_ + "." + k; }
  std::string name() const { return prefix_.empty() ? "<root>" : prefix_; }

  template <typename T>
  void read(const std::string& k, T& out) {
    seen_.insert(k);
    auto it = obj_.find(k);
    if (it == obj_.end() || it->is_null()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError("wrong type for '" + key(k) + "'", key(k));
    }
  }

  void read(const std::string& k, Interval& out) {
    std::array<double, 2> v{out.lower, out.upper};
    read(k, v);
    out = {v[0], v[1]};
  }

  void read(const std::string& k, std::optional<int>& out) {
    seen_.insert(k);
    auto it = obj_.find(k);
    if (it == obj_.end() || it->is_null()) return;
    if (!it->is_number_integer()) throw ConfigError("wrong type for '" + key(k) + "'", key(k));
    out = it->get<int>();
  }

  // Returns nullptr when the sub-object is absent.
  const json* child(const std::string& k) {
    seen_.insert(k);
    auto it = obj_.find(k);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  void finish() const {
    for (const auto& [k, _] : obj_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown key '" + key(k) + "'", key(k));
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void read_pathloss(const json& j, const std::string& prefix, PathlossCoefficients& pl) {
  Section s(j, prefix);
  s.read("intercept_db", pl.intercept_db);
  s.read("slope_db_per_decade", pl.slope_db_per_decade);
  s.read("freq_coeff_db", pl.freq_coeff_db);
  s.finish();
}

void read_link_class(const json& j, const std::string& prefix, LinkClassParams& lc) {
  Section s(j, prefix);
  if (auto* c = s.child("los")) read_pathloss(*c, s.key("los"), lc.los);
  if (auto* c = s.child("nlos")) read_pathloss(*c, s.key("nlos"), lc.nlos);
  s.read("shadowing_los_db", lc.shadowing_los_db);
  s.read("shadowing_nlos_db", lc.shadowing_nlos_db);
  s.finish();
}

void read_antenna(const json& j, const std::string& prefix, AntennaParams& a) {
  Section s(j, prefix);
  s.read("max_gain_dbi", a.max_gain_dbi);
  s.read("beamwidth_deg", a.beamwidth_deg);
  s.read("front_to_back_db", a.front_to_back_db);
  s.finish();
}

void read_site(Section& s, SiteParams& site) {
  s.read("carrier_hz", site.carrier_hz);
  s.read("bandwidth_hz", site.bandwidth_hz);
  s.read("sectors", site.sectors);
  s.read("height_m", site.height_m);
  s.read("dl_tx_power_dbm", site.dl_tx_power_dbm);
  s.read("association_bias_db", site.association_bias_db);
  s.read("noise_figure_db", site.noise_figure_db);
  if (auto* c = s.child("antenna")) read_antenna(*c, s.key("antenna"), site.antenna);
}

int line_of_byte(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError("invalid value for '" + key + "': " + why, key);
}

void require_positive(double v, const std::string& key) { require(std::isfinite(v) && v > 0.0, key, "must be > 0"); }

void validate_interval(const Interval& iv, const std::string& key) {
  require(std::isfinite(iv.lower) && std::isfinite(iv.upper), key, "must be finite");
  require(iv.lower <= iv.upper, key, "lower bound exceeds upper bound");
}

void validate_link_class(const LinkClassParams& lc, const std::string& key) {
  require(lc.los.slope_db_per_decade >= 20.0, key + ".los.slope_db_per_decade", "must be >= 20");
  require(lc.nlos.slope_db_per_decade >= 20.0, key + ".nlos.slope_db_per_decade", "must be >= 20");
  require(lc.shadowing_los_db >= 0.0, key + ".shadowing_los_db", "must be >= 0");
  require(lc.shadowing_nlos_db >= 0.0, key + ".shadowing_nlos_db", "must be >= 0");
}

void validate_site(const SiteParams& s, std::size_t azimuths, const std::string& key) {
  require_positive(s.carrier_hz, key + ".carrier_hz");
  require_positive(s.bandwidth_hz, key + ".bandwidth_hz");
  require_positive(s.height_m, key + ".height_m");
  require(s.sectors == 2 || s.sectors == 3, key + ".sectors", "must be 2 or 3");
  require(azimuths == static_cast<std::size_t>(s.sectors), key + ".azimuths_deg", "needs one azimuth per sector");
  require_positive(s.antenna.beamwidth_deg, key + ".antenna.beamwidth_deg");
  require(s.antenna.front_to_back_db >= 0.0, key + ".antenna.front_to_back_db", "must be >= 0");
  require(s.noise_figure_db >= 0.0, key + ".noise_figure_db", "must be >= 0");
  require(std::isfinite(s.association_bias_db), key + ".association_bias_db", "must be finite");
}

}  // namespace

ScenarioConfig default_config() {
  ScenarioConfig cfg;

  cfg.macro.carrier_hz = 800e6;
  cfg.macro.bandwidth_hz = 10e6;
  cfg.macro.sectors = 3;
  cfg.macro.height_m = 60.0;
  cfg.macro.dl_tx_power_dbm = 46.0;
  cfg.macro.antenna = {14.0, 65.0, 20.0};
  cfg.macro.noise_figure_db = 5.0;
  cfg.macro.position_m = {179.0, 268.0};
  cfg.macro.azimuths_deg = {30.0, 150.0, 270.0};

  cfg.micro.enabled = false;
  cfg.micro.carrier_hz = 2.6e9;
  cfg.micro.bandwidth_hz = 40e6;
  cfg.micro.sectors = 2;
  cfg.micro.height_m = 10.0;
  cfg.micro.dl_tx_power_dbm = 30.0;
  cfg.micro.association_bias_db = 14.0;
  cfg.micro.antenna = {5.0, 90.0, 20.0};
  cfg.micro.noise_figure_db = 5.0;
  cfg.micro.sites_m = {{193.5, 69.0}, {193.5, 207.0}, {193.5, 345.0}, {193.5, 483.0}};
  cfg.micro.azimuths_deg = {90.0, 270.0};

  // Urban macro and street-canyon micro coefficients; the UE-UE class reuses
  // the street-canyon set with both ends at street level.
  cfg.channel.macro = {{28.0, 22.0, 20.0}, {13.54, 39.08, 20.0}, 4.0, 6.0};
  cfg.channel.micro = {{32.4, 21.0, 20.0}, {22.4, 35.3, 21.3}, 4.0, 7.82};
  cfg.channel.d2d = {{32.4, 21.0, 20.0}, {22.4, 35.3, 21.3}, 4.0, 7.82};
  return cfg;
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("parse error at line " + std::to_string(line) + ": " + e.what(), "", line);
  }

  ScenarioConfig cfg = default_config();
  Section top(root, "");
  if (auto it = root.find("seed"); it != root.end() && !it->is_null()) {
    if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned()))
      throw ConfigError("invalid value for 'seed': must be a non-negative integer", "seed");
  }
  top.read("seed", cfg.seed);
  top.read("drops", cfg.drops);
  top.read("noise_density_dbm_per_hz", cfg.noise_density_dbm_per_hz);

  if (auto* j = top.child("grid")) {
    Section s(*j, "grid");
    s.read("width_m", cfg.grid.width_m);
    s.read("height_m", cfg.grid.height_m);
    s.read("floors_min", cfg.grid.floors_min);
    s.read("floors_max", cfg.grid.floors_max);
    s.read("floor_height_m", cfg.grid.floor_height_m);
    s.finish();
  }
  if (auto* j = top.child("users")) {
    Section s(*j, "users");
    s.read("density_per_km2", cfg.users.density_per_km2);
    s.read("d2d_fraction", cfg.users.d2d_fraction);
    s.read("max_pair_distance_m", cfg.users.max_pair_distance_m);
    s.read("height_m", cfg.users.height_m);
    s.read("max_tx_power_dbm", cfg.users.max_tx_power_dbm);
    s.read("noise_figure_db", cfg.users.noise_figure_db);
    s.read("fixed_count_per_grid", cfg.users.fixed_count_per_grid);
    s.finish();
  }
  if (auto* j = top.child("macro")) {
    Section s(*j, "macro");
    read_site(s, cfg.macro);
    s.read("position_m", cfg.macro.position_m);
    s.read("azimuths_deg", cfg.macro.azimuths_deg);
    s.finish();
  }
  if (auto* j = top.child("micro")) {
    Section s(*j, "micro");
    read_site(s, cfg.micro);
    s.read("enabled", cfg.micro.enabled);
    s.read("sites_m", cfg.micro.sites_m);
    s.read("azimuths_deg", cfg.micro.azimuths_deg);
    s.finish();
  }
  if (auto* j = top.child("channel")) {
    Section s(*j, "channel");
    if (auto* c = s.child("macro")) read_link_class(*c, "channel.macro", cfg.channel.macro);
    if (auto* c = s.child("micro")) read_link_class(*c, "channel.micro", cfg.channel.micro);
    if (auto* c = s.child("d2d")) read_link_class(*c, "channel.d2d", cfg.channel.d2d);
    s.read("decorrelation_distance_m", cfg.channel.decorrelation_distance_m);
    s.read("ue_antenna_gain_dbi", cfg.channel.ue_antenna_gain_dbi);
    s.finish();
  }
  if (auto* j = top.child("snr_targets")) {
    Section s(*j, "snr_targets");
    s.read("cellular_db", cfg.snr_targets.cellular_db);
    s.read("d2d_db", cfg.snr_targets.d2d_db);
    s.read("d2d_scheme2_db", cfg.snr_targets.d2d_scheme2_db);
    s.finish();
  }
  if (auto* j = top.child("rrm")) {
    Section s(*j, "rrm");
    s.read("gamma_cell_db", cfg.rrm.gamma_cell_db);
    s.read("distance_ratio", cfg.rrm.distance_ratio);
    s.finish();
  }
  if (auto* j = top.child("signaling")) {
    Section s(*j, "signaling");
    std::string model(1, cfg.signaling.discovery_model);
    s.read("discovery_model", model);
    if (model != "A" && model != "B") throw ConfigError("invalid value for 'signaling.discovery_model': must be \"A\" or \"B\"", "signaling.discovery_model");
    cfg.signaling.discovery_model = model[0];
    s.read("max_retries", cfg.signaling.max_retries);
    s.finish();
  }
  top.finish();

  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", "");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ScenarioConfig& cfg) {
  require_positive(cfg.grid.width_m, "grid.width_m");
  require_positive(cfg.grid.height_m, "grid.height_m");
  require_positive(cfg.grid.floor_height_m, "grid.floor_height_m");
  require(cfg.grid.floors_min >= 1, "grid.floors_min", "must be >= 1");
  require(cfg.grid.floors_max >= cfg.grid.floors_min, "grid.floors_max", "must be >= floors_min");

  require_positive(cfg.users.density_per_km2, "users.density_per_km2");
  require(cfg.users.d2d_fraction >= 0.0 && cfg.users.d2d_fraction <= 1.0, "users.d2d_fraction", "must lie in [0,1]");
  require_positive(cfg.users.max_pair_distance_m, "users.max_pair_distance_m");
  require_positive(cfg.users.height_m, "users.height_m");
  require(std::isfinite(cfg.users.max_tx_power_dbm), "users.max_tx_power_dbm", "must be finite");
  require(cfg.users.noise_figure_db >= 0.0, "users.noise_figure_db", "must be >= 0");
  if (cfg.users.fixed_count_per_grid) {
    require(*cfg.users.fixed_count_per_grid >= 0, "users.fixed_count_per_grid", "must be >= 0");
  }

  validate_site(cfg.macro, cfg.macro.azimuths_deg.size(), "macro");
  validate_site(cfg.micro, cfg.micro.azimuths_deg.size(), "micro");
  for (const auto& p : {cfg.macro.position_m}) {
    require(p[0] >= 0.0 && p[0] <= 387.0 && p[1] >= 0.0 && p[1] <= 552.0, "macro.position_m", "must lie inside the canonical grid");
  }
  for (const auto& p : cfg.micro.sites_m) {
    require(p[0] >= 0.0 && p[0] <= 387.0 && p[1] >= 0.0 && p[1] <= 552.0, "micro.sites_m", "must lie inside the canonical grid");
  }

  validate_link_class(cfg.channel.macro, "channel.macro");
  validate_link_class(cfg.channel.micro, "channel.micro");
  validate_link_class(cfg.channel.d2d, "channel.d2d");
  require(cfg.channel.decorrelation_distance_m >= 0.0, "channel.decorrelation_distance_m", "must be >= 0");

  validate_interval(cfg.snr_targets.cellular_db, "snr_targets.cellular_db");
  validate_interval(cfg.snr_targets.d2d_db, "snr_targets.d2d_db");
  validate_interval(cfg.snr_targets.d2d_scheme2_db, "snr_targets.d2d_scheme2_db");

  require(cfg.rrm.gamma_cell_db >= 0.0, "rrm.gamma_cell_db", "must be >= 0");
  require_positive(cfg.rrm.distance_ratio, "rrm.distance_ratio");
  require(std::isfinite(cfg.noise_density_dbm_per_hz), "noise_density_dbm_per_hz", "must be finite");
  require(cfg.signaling.max_retries >= 0, "signaling.max_retries", "must be >= 0");
  require(cfg.drops >= 1, "drops", "must be >= 1");
}

}  // namespace d2dsim
