#include "d2dsim/feasibility.hpp"

#include <ostream>

#include "d2dsim/units.hpp"

namespace d2dsim {

double sinr_d2d(std::size_t m, std::size_t n, const ChannelGainSet& gains, const LinkPowers& powers, double sigma2) {
  return gains.h_d2d[m] * powers.d2d[m] / (gains.h_cross(m, n) * powers.cell[n] + sigma2);
}

double sinr_cell(std::size_t m, std::size_t n, const ChannelGainSet& gains, const LinkPowers& powers, double sigma2) {
  return gains.h_cell[n] * powers.cell[n] / (gains.h_d2d_to_bs[m] * powers.d2d[m] + sigma2);
}

double baseline_sinr(std::size_t n, const ChannelGainSet& gains, const LinkPowers& powers, double sigma2) {
  return gains.h_cell[n] * powers.cell[n] / sigma2;
}

SinrTargets SinrTargets::uniform(std::size_t pairs, std::size_t cellular, double d2d_db, double cell_db) {
  return {std::vector<double>(pairs, d2d_db), std::vector<double>(cellular, cell_db)};
}

FeasibilityMatrix feasibility_exact(const ChannelGainSet& gains, const LinkPowers& powers, const SectorNoise& noise,
                                    const SinrTargets& targets) {
  const std::size_t N = gains.pair_count();
  const std::size_t M = gains.cellular_count();
  FeasibilityMatrix f{FeasibilityMode::Exact, Matrix<std::uint8_t>(N, M, 0)};
  for (std::size_t m = 0; m < N; ++m) {
    const double d2d_target = db_to_linear(targets.d2d_db[m]);
    for (std::size_t n = 0; n < M; ++n) {
      const bool d2d_ok = sinr_d2d(m, n, gains, powers, noise.ue_w) >= d2d_target;
      const bool cell_ok = sinr_cell(m, n, gains, powers, noise.bs_w) >= db_to_linear(targets.cell_db[n]);
      f.entries(m, n) = d2d_ok && cell_ok;
    }
  }
  return f;
}

ContextDistances context_distances(const SectorMembers& members, const UserDrop& drop) {
  const std::size_t N = members.pairs.size();
  const std::size_t M = members.cellular.size();
  ContextDistances d;
  d.interferer_to_rx = Matrix<double>(N, M);
  for (std::size_t m = 0; m < N; ++m) {
    const D2DPair& p = drop.pairs[static_cast<std::size_t>(members.pairs[m])];
    d.pair_distance.push_back(p.distance_m);
    const Vec3& rx = drop.users[static_cast<std::size_t>(p.rx)].position;
    for (std::size_t n = 0; n < M; ++n) {
      d.interferer_to_rx(m, n) = distance_3d(drop.users[static_cast<std::size_t>(members.cellular[n])].position, rx);
    }
  }
  return d;
}

RatioThreshold constant_ratio(double gamma) {
  return [gamma](double, double) { return gamma; };
}

FeasibilityMatrix feasibility_context(const ContextDistances& distances, const ChannelGainSet& gains,
                                      const LinkPowers& powers, const SectorNoise& noise,
                                      const ContextCriteria& criteria) {
  const std::size_t N = gains.pair_count();
  const std::size_t M = gains.cellular_count();
  const bool absolute = !criteria.cell_target_db.empty();
  const double allowed_drop = db_to_linear(-criteria.gamma_cell_db);

  std::vector<double> cell_floor(M);
  for (std::size_t n = 0; n < M; ++n) {
    cell_floor[n] = absolute ? db_to_linear(criteria.cell_target_db[n])
                             : baseline_sinr(n, gains, powers, noise.bs_w) * allowed_drop;
  }

  FeasibilityMatrix f{FeasibilityMode::Context, Matrix<std::uint8_t>(N, M, 0)};
  for (std::size_t m = 0; m < N; ++m) {
    const double dm = distances.pair_distance[m];
    if (!(dm > 0.0)) throw ModelError("degenerate pair");
    const double target = criteria.d2d_target_db.empty() ? 0.0 : criteria.d2d_target_db[m];
    const double gamma = criteria.ratio(target, dm);
    for (std::size_t n = 0; n < M; ++n) {
      const bool ratio_ok = distances.interferer_to_rx(m, n) / dm >= gamma;
      const bool cell_ok = sinr_cell(m, n, gains, powers, noise.bs_w) >= cell_floor[n];
      f.entries(m, n) = ratio_ok && cell_ok;
    }
  }
  return f;
}

void write_feasibility_csv_header(std::ostream& out) { out << "mode,sector,m,n,f\n"; }

void write_feasibility_csv(std::ostream& out, int sector, const FeasibilityMatrix& f) {
  const char* mode = f.mode == FeasibilityMode::Exact ? "exact" : "context";
  for (std::size_t m = 0; m < f.pair_count(); ++m) {
    for (std::size_t n = 0; n < f.cellular_count(); ++n) {
      out << mode << ',' << sector << ',' << m << ',' << n << ',' << int(f.entries(m, n)) << '\n';
    }
  }
}

}  // namespace d2dsim
