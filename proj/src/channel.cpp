#include "d2dsim/channel.hpp"

#include <algorithm>
#include <cmath>

#include "d2dsim/units.hpp"

namespace d2dsim {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinDistance = 1.0;

double evaluate(const PathlossCoefficients& c, double distance_m, double carrier_hz) {
  return c.intercept_db + c.slope_db_per_decade * std::log10(std::max(distance_m, kMinDistance)) +
         c.freq_coeff_db * std::log10(carrier_hz / 1e9);
}

double sigma_for(const LinkClassParams& lc, bool los) { return los ? lc.shadowing_los_db : lc.shadowing_nlos_db; }

constexpr std::uint64_t kSiteLabel = 0x5349544501ULL;
constexpr std::uint64_t kUserLabel = 0x5553455202ULL;

}  // namespace

const LinkClassParams& link_class_params(const ChannelModelParams& params, LinkClass cls) {
  switch (cls) {
    case LinkClass::Macro:
      return params.macro;
    case LinkClass::Micro:
      return params.micro;
    case LinkClass::D2D:
      break;
  }
  return params.d2d;
}

double pathloss_db(double distance_m, bool los, LinkClass cls, double carrier_hz, const ChannelModelParams& params) {
  const LinkClassParams& lc = link_class_params(params, cls);
  const double pl_los = evaluate(lc.los, distance_m, carrier_hz);
  if (los) return pl_los;
  return std::max(pl_los, evaluate(lc.nlos, distance_m, carrier_hz));
}

double pathloss_db(const Vec3& tx, const Vec3& rx, LinkClass cls, double carrier_hz, const Environment& env,
                   const ChannelModelParams& params) {
  const double d = distance_3d(tx, rx);
  if (d == 0.0) throw ModelError("degenerate link");
  return pathloss_db(d, env.line_of_sight(tx, rx), cls, carrier_hz, params);
}

double antenna_gain_dbi(const AntennaParams& antenna, double offset_deg) {
  double off = std::fmod(offset_deg, 360.0);
  if (off > 180.0) off -= 360.0;
  if (off < -180.0) off += 360.0;
  const double ratio = off / antenna.beamwidth_deg;
  return antenna.max_gain_dbi - std::min(12.0 * ratio * ratio, antenna.front_to_back_db);
}

double sector_antenna_gain_dbi(const Sector& sector, const Vec3& target) {
  const double bearing = std::atan2(target.y - sector.position.y, target.x - sector.position.x) * 180.0 / kPi;
  return antenna_gain_dbi(sector.antenna, bearing - sector.azimuth_deg);
}

double combine_gain_linear(double pathloss_db, double shadowing_db, double tx_antenna_dbi, double rx_antenna_dbi) {
  const double gain_db = -pathloss_db + shadowing_db + tx_antenna_dbi + rx_antenna_dbi;
  return std::min(1.0, db_to_linear(gain_db));
}

double ShadowField::unit_site_link(int site, int user, const Vec3& user_position) const {
  const double spacing = params_->decorrelation_distance_m;
  const std::uint64_t base = mix(mix(seed_, kSiteLabel), static_cast<std::uint64_t>(site));
  if (spacing <= 0.0) return keyed_normal(mix(base, static_cast<std::uint64_t>(user)));

  // Bilinear interpolation of i.i.d. lattice values, renormalised to unit variance.
  const double gx = user_position.x / spacing;
  const double gy = user_position.y / spacing;
  const double ix = std::floor(gx);
  const double iy = std::floor(gy);
  const double fx = gx - ix;
  const double fy = gy - iy;
  double acc = 0.0;
  double norm = 0.0;
  for (int dy = 0; dy < 2; ++dy) {
    for (int dx = 0; dx < 2; ++dx) {
      const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
      const auto kx = static_cast<std::uint64_t>(static_cast<std::int64_t>(ix) + dx);
      const auto ky = static_cast<std::uint64_t>(static_cast<std::int64_t>(iy) + dy);
      acc += w * keyed_normal(mix(mix(base, kx), ky));
      norm += w * w;
    }
  }
  return acc / std::sqrt(norm);
}

double ShadowField::unit_user_link(int user_a, int user_b) const {
  const auto lo = static_cast<std::uint64_t>(std::min(user_a, user_b));
  const auto hi = static_cast<std::uint64_t>(std::max(user_a, user_b));
  return keyed_normal(mix(mix(mix(seed_, kUserLabel), lo), hi));
}

double ShadowField::site_link_db(LinkClass cls, bool los, int site, int user, const Vec3& user_position) const {
  return sigma_for(link_class_params(*params_, cls), los) * unit_site_link(site, user, user_position);
}

double ShadowField::user_link_db(bool los, int user_a, int user_b) const {
  return sigma_for(params_->d2d, los) * unit_user_link(user_a, user_b);
}

double ChannelModel::user_sector_gain_db(const UserTerminal& user, const Sector& sector) const {
  const LinkClass cls = sector.kind == SiteKind::Macro ? LinkClass::Macro : LinkClass::Micro;
  const double d = distance_3d(user.position, sector.position);
  if (d == 0.0) throw ModelError("degenerate link");
  const bool los = env_->line_of_sight(user.position, sector.position);
  const double pl = pathloss_db(d, los, cls, sector.carrier_hz, *params_);
  const double sh = shadow_.site_link_db(cls, los, sector.site, user.id, user.position);
  const double gain_db =
      -pl + sh + params_->ue_antenna_gain_dbi + sector_antenna_gain_dbi(sector, user.position);
  return std::min(0.0, gain_db);
}

double ChannelModel::user_sector_gain(const UserTerminal& user, const Sector& sector) const {
  return db_to_linear(user_sector_gain_db(user, sector));
}

double ChannelModel::user_user_gain(const UserTerminal& a, const UserTerminal& b, double carrier_hz) const {
  const double d = distance_3d(a.position, b.position);
  if (d == 0.0) throw ModelError("degenerate link");
  const bool los = env_->line_of_sight(a.position, b.position);
  const double pl = pathloss_db(d, los, LinkClass::D2D, carrier_hz, *params_);
  return combine_gain_linear(pl, shadow_.user_link_db(los, a.id, b.id), params_->ue_antenna_gain_dbi,
                             params_->ue_antenna_gain_dbi);
}

std::vector<SectorMembers> group_by_sector(const UserDrop& drop, std::size_t sector_count) {
  std::vector<SectorMembers> out(sector_count);
  for (std::size_t s = 0; s < sector_count; ++s) out[s].sector = static_cast<int>(s);
  for (const UserTerminal& u : drop.users) {
    if (u.role == Role::Cellular && u.serving_sector >= 0) {
      out[static_cast<std::size_t>(u.serving_sector)].cellular.push_back(u.id);
    }
  }
  for (const D2DPair& p : drop.pairs) {
    const UserTerminal& tx = drop.users[static_cast<std::size_t>(p.tx)];
    const UserTerminal& rx = drop.users[static_cast<std::size_t>(p.rx)];
    if (tx.serving_sector < 0 || rx.serving_sector < 0) continue;
    out[static_cast<std::size_t>(tx.serving_sector)].pairs.push_back(p.id);
  }
  return out;
}

ChannelGainSet build_gain_set(const SectorMembers& members, const UserDrop& drop, const ChannelModel& channel) {
  const Sector& sector = channel.environment().sectors[static_cast<std::size_t>(members.sector)];
  const auto& users = drop.users;
  const std::size_t M = members.cellular.size();
  const std::size_t N = members.pairs.size();

  ChannelGainSet g;
  g.h_cell.reserve(M);
  for (int id : members.cellular) g.h_cell.push_back(channel.user_sector_gain(users[static_cast<std::size_t>(id)], sector));
  g.h_cross = Matrix<double>(N, M);
  for (std::size_t m = 0; m < N; ++m) {
    const D2DPair& p = drop.pairs[static_cast<std::size_t>(members.pairs[m])];
    const UserTerminal& tx = users[static_cast<std::size_t>(p.tx)];
    const UserTerminal& rx = users[static_cast<std::size_t>(p.rx)];
    g.h_d2d.push_back(channel.user_user_gain(tx, rx, sector.carrier_hz));
    g.h_d2d_to_bs.push_back(channel.user_sector_gain(tx, sector));
    for (std::size_t n = 0; n < M; ++n) {
      g.h_cross(m, n) = channel.user_user_gain(users[static_cast<std::size_t>(members.cellular[n])], rx, sector.carrier_hz);
    }
  }
  return g;
}

double noise_power_watts(const NoiseModel& noise) {
  return dbm_to_watts(noise.density_dbm_per_hz + noise.noise_figure_db + 10.0 * std::log10(noise.bandwidth_hz));
}

}  // namespace d2dsim
