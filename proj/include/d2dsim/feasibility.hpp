#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "d2dsim/channel.hpp"
#include "d2dsim/matrix.hpp"

namespace d2dsim {

/// Transmit powers (watts) of one sector's links, indexed like ChannelGainSet.
struct LinkPowers {
  std::vector<double> cell;  // M
  std::vector<double> d2d;   // N
};

/// Receiver noise of one sector's resource: at the base station (cellular
/// receiver) and at a UE (D2D receiver).
struct SectorNoise {
  double bs_w = 0.0;
  double ue_w = 0.0;
};

/// SINR at D2D Rx m when pair m reuses the resource of cellular UE n.
double sinr_d2d(std::size_t m, std::size_t n, const ChannelGainSet& gains, const LinkPowers& powers, double sigma2);

/// SINR at the base station for cellular UE n when pair m reuses its resource.
double sinr_cell(std::size_t m, std::size_t n, const ChannelGainSet& gains, const LinkPowers& powers, double sigma2);

/// SINR of cellular UE n without any reuse.
double baseline_sinr(std::size_t n, const ChannelGainSet& gains, const LinkPowers& powers, double sigma2);

enum class FeasibilityMode { Exact, Context };

struct FeasibilityMatrix {
  FeasibilityMode mode = FeasibilityMode::Exact;
  Matrix<std::uint8_t> entries;  // N x M

  std::size_t pair_count() const { return entries.rows(); }
  std::size_t cellular_count() const { return entries.cols(); }
  bool operator()(std::size_t m, std::size_t n) const { return entries(m, n) != 0; }
};

/// Per-link SINR targets in dB: one per D2D pair and one per cellular UE.
struct SinrTargets {
  std::vector<double> d2d_db;
  std::vector<double> cell_db;

  static SinrTargets uniform(std::size_t pairs, std::size_t cellular, double d2d_db, double cell_db);
};

/// Exact feasibility: both SINR conditions hold (inclusive) in the linear domain.
FeasibilityMatrix feasibility_exact(const ChannelGainSet& gains, const LinkPowers& powers, const SectorNoise& noise,
                                    const SinrTargets& targets);

struct ContextDistances {
  std::vector<double> pair_distance;  // N: d_m
  Matrix<double> interferer_to_rx;    // N x M: cellular UE n -> D2D Rx m
};

ContextDistances context_distances(const SectorMembers& members, const UserDrop& drop);

/// Distance-ratio threshold as a function of the pair's D2D target (dB) and
/// its distance d_m.
using RatioThreshold = std::function<double(double d2d_target_db, double pair_distance_m)>;

RatioThreshold constant_ratio(double gamma);

/// Criteria of the location-based feasibility check. The cellular condition
/// is either an absolute per-UE target (when `cell_target_db` is non-empty)
/// or the baseline SINR minus the allowed deterioration `gamma_cell_db`.
struct ContextCriteria {
  double gamma_cell_db = 0.0;
  std::vector<double> cell_target_db;
  RatioThreshold ratio = constant_ratio(1.0);
  std::vector<double> d2d_target_db;  // passed to `ratio`; zeros when empty
};

/// Throws ModelError("degenerate pair") when some d_m is zero.
FeasibilityMatrix feasibility_context(const ContextDistances& distances, const ChannelGainSet& gains,
                                      const LinkPowers& powers, const SectorNoise& noise,
                                      const ContextCriteria& criteria);

/// Long-form CSV rows: mode,sector,m,n,f
void write_feasibility_csv(std::ostream& out, int sector, const FeasibilityMatrix& f);
void write_feasibility_csv_header(std::ostream& out);

}  // namespace d2dsim
