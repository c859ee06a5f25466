#include "d2dsim/scenario.hpp"

#include <cmath>
#include <limits>

#include "d2dsim/channel.hpp"
#include "d2dsim/units.hpp"

namespace d2dsim {
namespace {

constexpr double kCanonicalWidth = 387.0;
constexpr double kCanonicalHeight = 552.0;

// Column and row extents of the building blocks. Half-width streets run
// along the grid edges so the 3x3 tiling yields full streets between
// replicas; the 25 m north-south main street separates columns 1 and 2.
constexpr double kColumns[4][2] = {{7.0, 87.0}, {101.0, 181.0}, {206.0, 286.0}, {300.0, 380.0}};
constexpr double kRows[4][2] = {{6.0, 132.0}, {144.0, 270.0}, {282.0, 408.0}, {420.0, 546.0}};
constexpr int kParkColumn = 2;
constexpr int kParkRow = 2;

Rect scale(const Rect& r, double sx, double sy) { return {r.x0 * sx, r.y0 * sy, r.x1 * sx, r.y1 * sy}; }

double grid_offset_x(int grid, double width) { return (grid % 3 - 1) * width; }
double grid_offset_y(int grid, double height) { return (grid / 3 - 1) * height; }

}  // namespace

std::vector<Rect> canonical_building_footprints() {
  std::vector<Rect> out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (c == kParkColumn && r == kParkRow) continue;
      out.push_back({kColumns[c][0], kRows[r][0], kColumns[c][1], kRows[r][1]});
    }
  }
  return out;
}

Rect canonical_park() {
  return {kColumns[kParkColumn][0], kRows[kParkRow][0], kColumns[kParkColumn][1], kRows[kParkRow][1]};
}

Rect Environment::grid_bounds(int grid) const {
  const double dx = grid_offset_x(grid, grid_width_m);
  const double dy = grid_offset_y(grid, grid_height_m);
  return {dx, dy, dx + grid_width_m, dy + grid_height_m};
}

bool Environment::is_outdoor(double x, double y) const {
  for (int g = 0; g < kGridCount; ++g) {
    if (!grid_bounds(g).contains(x, y)) continue;
    for (int b = 0; b < kBuildingsPerGrid; ++b) {
      const Rect& f = buildings[static_cast<std::size_t>(g * kBuildingsPerGrid + b)].footprint;
      if (x > f.x0 && x < f.x1 && y > f.y0 && y < f.y1) return false;
    }
  }
  return true;
}

bool Environment::line_of_sight(const Vec3& a, const Vec3& b) const {
  const Rect box{std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
  for (int g = 0; g < kGridCount; ++g) {
    const Rect gb = grid_bounds(g);
    if (box.x1 < gb.x0 || box.x0 > gb.x1 || box.y1 < gb.y0 || box.y0 > gb.y1) continue;
    for (int k = 0; k < kBuildingsPerGrid; ++k) {
      const Building& bld = buildings[static_cast<std::size_t>(g * kBuildingsPerGrid + k)];
      const Rect& f = bld.footprint;
      if (box.x1 <= f.x0 || box.x0 >= f.x1 || box.y1 <= f.y0 || box.y0 >= f.y1) continue;
      if (segment_hits_box(a, b, f, bld.height_m)) return false;
    }
  }
  return true;
}

Environment generate_environment(const ScenarioConfig& cfg, Rng& rng) {
  Environment env;
  env.grid_width_m = cfg.grid.width_m;
  env.grid_height_m = cfg.grid.height_m;
  const double sx = cfg.grid.width_m / kCanonicalWidth;
  const double sy = cfg.grid.height_m / kCanonicalHeight;

  // Replicas share the heights of the measured grid.
  std::uniform_int_distribution<int> floors(cfg.grid.floors_min, cfg.grid.floors_max);
  const auto footprints = canonical_building_footprints();
  std::vector<double> heights;
  for (std::size_t i = 0; i < footprints.size(); ++i) heights.push_back(floors(rng) * cfg.grid.floor_height_m);

  for (int g = 0; g < kGridCount; ++g) {
    const double dx = grid_offset_x(g, env.grid_width_m);
    const double dy = grid_offset_y(g, env.grid_height_m);
    for (std::size_t i = 0; i < footprints.size(); ++i) {
      env.buildings.push_back({scale(footprints[i], sx, sy).translated(dx, dy), heights[i], g});
    }
    env.parks.push_back(scale(canonical_park(), sx, sy).translated(dx, dy));
  }

  int site = 0;
  for (int g = 0; g < kGridCount; ++g, ++site) {
    const double dx = grid_offset_x(g, env.grid_width_m);
    const double dy = grid_offset_y(g, env.grid_height_m);
    for (int s = 0; s < cfg.macro.sectors; ++s) {
      Sector sec;
      sec.id = static_cast<int>(env.sectors.size());
      sec.site = site;
      sec.grid = g;
      sec.kind = SiteKind::Macro;
      sec.position = {cfg.macro.position_m[0] * sx + dx, cfg.macro.position_m[1] * sy + dy, cfg.macro.height_m};
      sec.azimuth_deg = cfg.macro.azimuths_deg[static_cast<std::size_t>(s)];
      sec.carrier_hz = cfg.macro.carrier_hz;
      sec.bandwidth_hz = cfg.macro.bandwidth_hz;
      sec.dl_tx_power_dbm = cfg.macro.dl_tx_power_dbm;
      sec.association_bias_db = cfg.macro.association_bias_db;
      sec.noise_figure_db = cfg.macro.noise_figure_db;
      sec.antenna = cfg.macro.antenna;
      env.sectors.push_back(sec);
    }
  }
  if (cfg.micro.enabled) {
    for (int g = 0; g < kGridCount; ++g) {
      const double dx = grid_offset_x(g, env.grid_width_m);
      const double dy = grid_offset_y(g, env.grid_height_m);
      for (const auto& pos : cfg.micro.sites_m) {
        for (int s = 0; s < cfg.micro.sectors; ++s) {
          Sector sec;
          sec.id = static_cast<int>(env.sectors.size());
          sec.site = site;
          sec.grid = g;
          sec.kind = SiteKind::Micro;
          sec.position = {pos[0] * sx + dx, pos[1] * sy + dy, cfg.micro.height_m};
          sec.azimuth_deg = cfg.micro.azimuths_deg[static_cast<std::size_t>(s)];
          sec.carrier_hz = cfg.micro.carrier_hz;
          sec.bandwidth_hz = cfg.micro.bandwidth_hz;
          sec.dl_tx_power_dbm = cfg.micro.dl_tx_power_dbm;
          sec.association_bias_db = cfg.micro.association_bias_db;
          sec.noise_figure_db = cfg.micro.noise_figure_db;
          sec.antenna = cfg.micro.antenna;
          env.sectors.push_back(sec);
        }
        ++site;
      }
    }
  }
  env.site_count = site;
  return env;
}

std::vector<D2DPair> form_pairs(std::vector<UserTerminal>& users, const std::vector<int>& candidates,
                                double max_distance_m) {
  std::vector<D2DPair> pairs;
  std::vector<char> taken(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (taken[i]) continue;
    const Vec3& pos = users[static_cast<std::size_t>(candidates[i])].position;
    std::size_t best = candidates.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j == i || taken[j]) continue;
      const double d = distance_3d(pos, users[static_cast<std::size_t>(candidates[j])].position);
      if (d > 0.0 && d <= max_distance_m && d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == candidates.size()) continue;
    taken[i] = taken[best] = 1;
    D2DPair p;
    p.id = static_cast<int>(pairs.size());
    p.tx = candidates[i];
    p.rx = candidates[best];
    p.distance_m = best_d;
    users[static_cast<std::size_t>(p.tx)].role = Role::D2DTx;
    users[static_cast<std::size_t>(p.rx)].role = Role::D2DRx;
    pairs.push_back(p);
  }
  return pairs;
}

UserDrop drop_users(const Environment& env, const ScenarioConfig& cfg, Rng& rng) {
  UserDrop drop;
  std::vector<int> candidates;
  for (int g = 0; g < kGridCount; ++g) {
    const Rect bounds = env.grid_bounds(g);
    int count = 0;
    if (cfg.users.fixed_count_per_grid) {
      count = *cfg.users.fixed_count_per_grid;
    } else {
      const double mean = cfg.users.density_per_km2 * bounds.area() * 1e-6;
      count = std::poisson_distribution<int>(mean)(rng);
    }
    for (int k = 0; k < count; ++k) {
      UserTerminal u;
      u.id = static_cast<int>(drop.users.size());
      u.grid = g;
      do {
        u.position.x = bounds.x0 + uniform_unit(rng) * bounds.width();
        u.position.y = bounds.y0 + uniform_unit(rng) * bounds.height();
      } while (!env.is_outdoor(u.position.x, u.position.y));
      u.position.z = cfg.users.height_m;
      if (uniform_unit(rng) < cfg.users.d2d_fraction) candidates.push_back(u.id);
      drop.users.push_back(u);
    }
  }
  drop.pairs = form_pairs(drop.users, candidates, cfg.users.max_pair_distance_m);
  return drop;
}

std::vector<int> associate_users(const std::vector<UserTerminal>& users, const Environment& env,
                                 const ChannelModel& channel) {
  std::vector<int> serving(users.size(), -1);
  for (std::size_t i = 0; i < users.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Sector& s : env.sectors) {
      const double gain_db = channel.user_sector_gain_db(users[i], s);
      if (db_to_linear(gain_db) <= 0.0) continue;
      const double rx_dbm = s.dl_tx_power_dbm + s.association_bias_db + gain_db;
      if (rx_dbm > best) {
        best = rx_dbm;
        serving[i] = s.id;
      }
    }
  }
  return serving;
}

}  // namespace d2dsim
