#pragma once

#include <cstdint>
#include <vector>

#include "d2dsim/config.hpp"
#include "d2dsim/geometry.hpp"
#include "d2dsim/random.hpp"

namespace d2dsim {

class ChannelModel;

constexpr int kGridCount = 9;
constexpr int kCentralGrid = 4;
constexpr int kBuildingsPerGrid = 15;

enum class SiteKind { Macro, Micro };

struct Building {
  Rect footprint;
  double height_m = 0.0;
  int grid = 0;
};

struct Sector {
  int id = 0;
  int site = 0;
  int grid = 0;
  SiteKind kind = SiteKind::Macro;
  Vec3 position;
  double azimuth_deg = 0.0;
  double carrier_hz = 0.0;
  double bandwidth_hz = 0.0;
  double dl_tx_power_dbm = 0.0;
  double association_bias_db = 0.0;
  double noise_figure_db = 0.0;
  AntennaParams antenna;
};

/// The 3x3 tiling of the canonical grid. Grid k has offset
/// ((k%3 - 1) * width, (k/3 - 1) * height); grid 4 is the measured one.
struct Environment {
  double grid_width_m = 0.0;
  double grid_height_m = 0.0;
  std::vector<Building> buildings;  // kBuildingsPerGrid per grid, grid-major
  std::vector<Rect> parks;          // one per grid
  std::vector<Sector> sectors;      // macro sectors first, then micro
  int site_count = 0;

  Rect grid_bounds(int grid) const;
  static bool is_central(int grid) { return grid == kCentralGrid; }
  bool is_outdoor(double x, double y) const;
  /// True when no building box intersects the segment.
  bool line_of_sight(const Vec3& a, const Vec3& b) const;
};

enum class Role { Cellular, D2DTx, D2DRx };

struct UserTerminal {
  int id = 0;
  Vec3 position;
  Role role = Role::Cellular;
  int grid = 0;
  int serving_sector = -1;  // -1 until associated or when in outage
  double tx_power_dbm = 0.0;
  double snr_target_db = 0.0;
};

struct D2DPair {
  int id = 0;
  int tx = 0;  // user ids
  int rx = 0;
  double distance_m = 0.0;
};

struct UserDrop {
  std::vector<UserTerminal> users;  // users[i].id == i
  std::vector<D2DPair> pairs;       // pairs[k].id == k
};

/// Canonical street layout: 15 building footprints and the park of one grid,
/// in metres for a 387 x 552 grid.
std::vector<Rect> canonical_building_footprints();
Rect canonical_park();

Environment generate_environment(const ScenarioConfig& cfg, Rng& rng);

UserDrop drop_users(const Environment& env, const ScenarioConfig& cfg, Rng& rng);

/// Nearest-neighbour pairing over the D2D candidates (ids into `users`),
/// in candidate order. Pairs' roles are written back into `users`.
std::vector<D2DPair> form_pairs(std::vector<UserTerminal>& users, const std::vector<int>& candidates,
                                double max_distance_m);

/// Serving sector per user: maximal average received downlink power plus
/// the sector's association bias (cell range expansion).
/// Ties go to the lowest sector id; -1 marks an outage user.
std::vector<int> associate_users(const std::vector<UserTerminal>& users, const Environment& env,
                                 const ChannelModel& channel);

}  // namespace d2dsim
