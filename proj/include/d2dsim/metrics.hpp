#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "d2dsim/feasibility.hpp"
#include "d2dsim/rrm.hpp"
#include "d2dsim/scenario.hpp"

namespace d2dsim {

/// Shannon capacity in bit/s.
double link_capacity(double sinr_linear, double bandwidth_hz);

/// One sector's links as evaluated by every scheme of a drop.
struct SectorState {
  int sector = 0;
  SiteKind tier = SiteKind::Macro;
  ChannelGainSet gains;
  LinkPowers powers;
  SectorNoise noise;
  double resource_bandwidth_hz = 0.0;  // each cellular UE's share; a reusing pair gets the same
  std::vector<char> cell_central;      // M: cellular UE lies in the measured grid
  std::vector<char> pair_central;      // N: pair transmitter lies in the measured grid
};

struct CapacityTotals {
  double cell_bps = 0.0;
  double d2d_bps = 0.0;
  std::size_t enabled_pairs = 0;

  double overall_bps() const { return cell_bps + d2d_bps; }
};

struct CapacityReport {
  Scheme scheme = Scheme::None;
  CapacityTotals all;
  CapacityTotals macro;
  CapacityTotals micro;
  double clip_rate = 0.0;
  std::vector<double> cell_sinr_db;      // measured-grid cellular links
  std::vector<double> d2d_sinr_db;       // measured-grid enabled D2D links
  std::vector<double> baseline_sinr_db;  // measured-grid cellular links without reuse

  const CapacityTotals& tier(std::optional<SiteKind> t) const {
    if (!t) return all;
    return *t == SiteKind::Macro ? macro : micro;
  }
};

/// Capacity of one drop under per-sector allocations (same order as
/// `sectors`). Only links of the measured grid are aggregated.
CapacityReport evaluate_drop(Scheme scheme, const std::vector<SectorState>& sectors,
                             const std::vector<Allocation>& allocations, double clip_rate);

/// (value - baseline) / baseline, or nullopt for a zero baseline.
std::optional<double> relative_gain(double value, double baseline);

struct GainSummary {
  double mean = 0.0;
  double ci95 = 0.0;  // half-width, normal approximation
  std::size_t drops = 0;
  std::size_t undefined = 0;  // drops with a zero baseline
};

/// Per-drop relative gains averaged over drops.
GainSummary relative_gain(const std::vector<double>& values, const std::vector<double>& baselines);

void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, int drop, const CapacityReport& r, std::optional<SiteKind> tier);

}  // namespace d2dsim
