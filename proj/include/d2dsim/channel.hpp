#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dsim/config.hpp"
#include "d2dsim/matrix.hpp"
#include "d2dsim/scenario.hpp"

namespace d2dsim {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LinkClass { Macro, Micro, D2D };

const LinkClassParams& link_class_params(const ChannelModelParams& params, LinkClass cls);

/// Log-distance pathloss with a LOS/NLOS switch. LOS holds when the straight
/// 3D segment crosses no building box; the NLOS value is floored at the LOS
/// value for the same distance. Distances below 1 m are evaluated at 1 m.
/// Throws ModelError("degenerate link") for coincident end points.
double pathloss_db(const Vec3& tx, const Vec3& rx, LinkClass cls, double carrier_hz, const Environment& env,
                   const ChannelModelParams& params);

/// Closed form without the blockage test; `los` selects the coefficient set.
double pathloss_db(double distance_m, bool los, LinkClass cls, double carrier_hz, const ChannelModelParams& params);

/// Horizontal sector pattern: max gain - min(12 (offset/beamwidth)^2, front_to_back).
double antenna_gain_dbi(const AntennaParams& antenna, double offset_deg);

/// Gain towards `target` of a sector antenna at `origin` with boresight `azimuth_deg`.
double sector_antenna_gain_dbi(const Sector& sector, const Vec3& target);

/// 10^((-pathloss + shadowing + antennas)/10), clamped to at most 1.
double combine_gain_linear(double pathloss_db, double shadowing_db, double tx_antenna_dbi, double rx_antenna_dbi);

/// Log-normal shadowing frozen for one drop. Each link's value is a pure
/// function of (seed, link class, end point keys), so repeated queries agree
/// and a->b equals b->a. With a positive decorrelation distance, site links
/// draw from a per-site lattice field interpolated at the user position.
class ShadowField {
 public:
  ShadowField(std::uint64_t seed, const ChannelModelParams& params) : seed_(seed), params_(&params) {}

  /// Unit-variance value for the link; the caller scales by sigma.
  double unit_site_link(int site, int user, const Vec3& user_position) const;
  double unit_user_link(int user_a, int user_b) const;

  double site_link_db(LinkClass cls, bool los, int site, int user, const Vec3& user_position) const;
  double user_link_db(bool los, int user_a, int user_b) const;

 private:
  std::uint64_t seed_;
  const ChannelModelParams* params_;
};

/// Channel for one drop: environment + parameters + frozen shadowing.
class ChannelModel {
 public:
  ChannelModel(const Environment& env, const ChannelModelParams& params, std::uint64_t shadow_seed)
      : env_(&env), params_(&params), shadow_(shadow_seed, params) {}

  const Environment& environment() const { return *env_; }
  const ChannelModelParams& params() const { return *params_; }
  const ShadowField& shadow() const { return shadow_; }

  /// Gain in dB between a user and a sector at the sector's carrier.
  double user_sector_gain_db(const UserTerminal& user, const Sector& sector) const;
  double user_sector_gain(const UserTerminal& user, const Sector& sector) const;

  /// Gain between two users at the given carrier.
  double user_user_gain(const UserTerminal& a, const UserTerminal& b, double carrier_hz) const;

 private:
  const Environment* env_;
  const ChannelModelParams* params_;
  ShadowField shadow_;
};

/// Users and pairs attached to one sector. A pair belongs to the sector that
/// serves its transmitter.
struct SectorMembers {
  int sector = 0;
  std::vector<int> cellular;  // user ids, ascending
  std::vector<int> pairs;     // pair ids, ascending
};

std::vector<SectorMembers> group_by_sector(const UserDrop& drop, std::size_t sector_count);

/// The four gain collections one sector's RRM sees. Index m runs over the
/// sector's D2D pairs, n over its cellular users.
struct ChannelGainSet {
  std::vector<double> h_cell;       // M: cellular UE n -> serving BS
  std::vector<double> h_d2d;        // N: D2D Tx m -> D2D Rx m
  std::vector<double> h_d2d_to_bs;  // N: D2D Tx m -> serving BS
  Matrix<double> h_cross;           // N x M: cellular UE n -> D2D Rx m

  std::size_t cellular_count() const { return h_cell.size(); }
  std::size_t pair_count() const { return h_d2d.size(); }
};

ChannelGainSet build_gain_set(const SectorMembers& members, const UserDrop& drop, const ChannelModel& channel);

struct NoiseModel {
  double density_dbm_per_hz = -174.0;
  double noise_figure_db = 0.0;
  double bandwidth_hz = 1.0;
};

double noise_power_watts(const NoiseModel& noise);

}  // namespace d2dsim
