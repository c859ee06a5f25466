#include "d2dsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "d2dsim/units.hpp"

namespace d2dsim {

double link_capacity(double sinr_linear, double bandwidth_hz) { return bandwidth_hz * std::log2(1.0 + sinr_linear); }

CapacityReport evaluate_drop(Scheme scheme, const std::vector<SectorState>& sectors,
                             const std::vector<Allocation>& allocations, double clip_rate) {
  CapacityReport r;
  r.scheme = scheme;
  r.clip_rate = clip_rate;
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const SectorState& st = sectors[s];
    const Allocation& a = allocations[s];
    CapacityTotals& tier = st.tier == SiteKind::Macro ? r.macro : r.micro;
    const std::size_t M = st.gains.cellular_count();

    std::vector<int> reused_by(M, -1);
    for (std::size_t m = 0; m < a.pair_to_resource.size(); ++m) {
      if (a.pair_to_resource[m] >= 0) reused_by[static_cast<std::size_t>(a.pair_to_resource[m])] = static_cast<int>(m);
    }

    for (std::size_t n = 0; n < M; ++n) {
      if (!st.cell_central[n]) continue;
      const double base = baseline_sinr(n, st.gains, st.powers, st.noise.bs_w);
      const double sinr = reused_by[n] < 0
                              ? base
                              : sinr_cell(static_cast<std::size_t>(reused_by[n]), n, st.gains, st.powers, st.noise.bs_w);
      const double c = link_capacity(sinr, st.resource_bandwidth_hz);
      tier.cell_bps += c;
      r.all.cell_bps += c;
      r.cell_sinr_db.push_back(linear_to_db(sinr));
      r.baseline_sinr_db.push_back(linear_to_db(base));
    }
    for (std::size_t m = 0; m < a.pair_to_resource.size(); ++m) {
      const int n = a.pair_to_resource[m];
      if (n < 0 || !st.pair_central[m]) continue;
      const double sinr = sinr_d2d(m, static_cast<std::size_t>(n), st.gains, st.powers, st.noise.ue_w);
      const double c = link_capacity(sinr, st.resource_bandwidth_hz);
      tier.d2d_bps += c;
      r.all.d2d_bps += c;
      ++tier.enabled_pairs;
      ++r.all.enabled_pairs;
      r.d2d_sinr_db.push_back(linear_to_db(sinr));
    }
  }
  return r;
}

std::optional<double> relative_gain(double value, double baseline) {
  if (baseline == 0.0) return std::nullopt;
  return (value - baseline) / baseline;
}

GainSummary relative_gain(const std::vector<double>& values, const std::vector<double>& baselines) {
  GainSummary g;
  std::vector<double> gains;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (auto v = relative_gain(values[i], baselines[i])) {
      gains.push_back(*v);
    } else {
      ++g.undefined;
    }
  }
  g.drops = gains.size();
  if (gains.empty()) {
    g.mean = std::nan("");
    return g;
  }
  double sum = 0.0;
  for (double v : gains) sum += v;
  g.mean = sum / static_cast<double>(gains.size());
  if (gains.size() > 1) {
    double ss = 0.0;
    for (double v : gains) ss += (v - g.mean) * (v - g.mean);
    const double sd = std::sqrt(ss / static_cast<double>(gains.size() - 1));
    g.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(gains.size()));
  }
  return g;
}

void write_report_csv_header(std::ostream& out) {
  out << "drop,scheme,cell_bps,d2d_bps,overall_bps,enabled_pairs,clip_rate\n";
}

void write_report_csv_row(std::ostream& out, int drop, const CapacityReport& r, std::optional<SiteKind> tier) {
  const CapacityTotals& t = r.tier(tier);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%s,%.3f,%.3f,%.3f,%zu,%.6f\n", drop, std::string(scheme_name(r.scheme)).c_str(),
                t.cell_bps, t.d2d_bps, t.overall_bps(), t.enabled_pairs, r.clip_rate);
  out << buf;
}

}  // namespace d2dsim
