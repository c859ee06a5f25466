#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2dsim/config.hpp"
#include "d2dsim/metrics.hpp"
#include "d2dsim/rrm.hpp"
#include "d2dsim/signaling.hpp"

namespace d2dsim {

enum class ScenarioKind { MacroScheme1, MacroScheme2, Hetnet };

std::string_view scenario_name(ScenarioKind k);
std::optional<ScenarioKind> parse_scenario(std::string_view name);

/// Base config with the scenario's switches applied: micro sites on or off
/// and the D2D SNR target interval.
ScenarioConfig apply_scenario(const ScenarioConfig& base, ScenarioKind kind);

/// Drop-level counts that do not depend on the scheme.
struct DropStats {
  std::size_t users = 0;
  std::size_t central_users = 0;
  std::size_t pairs = 0;
  std::size_t central_pairs = 0;
  std::size_t central_cellular = 0;
  std::size_t outage_users = 0;
  std::size_t feasible_entries = 0;  // location-based check, measured grid sectors
  std::size_t candidate_entries = 0;
};

struct DropResult {
  std::uint64_t seed = 0;
  std::vector<CapacityReport> reports;  // one per requested scheme, same order
  CapacityReport baseline;              // no-D2D reference, always computed
  ProtocolTrace trace;                  // representative signaling run
  DropStats stats;
};

/// Optional per-drop debug sinks; null streams are skipped.
struct DropDump {
  std::ostream* gains = nullptr;
  std::ostream* powers = nullptr;
  std::ostream* feasibility = nullptr;
  std::ostream* allocations = nullptr;
  int drop_index = 0;
};

/// One Monte Carlo realisation. All schemes see identical users, gains,
/// powers and targets; the random scheme draws from its own labeled stream.
DropResult run_drop(const ScenarioConfig& cfg, std::uint64_t seed, const std::vector<Scheme>& schemes,
                    const DropDump* dump = nullptr);

class DropFailure : public std::runtime_error {
 public:
  DropFailure(std::uint64_t seed, const std::string& what)
      : std::runtime_error("drop with seed " + std::to_string(seed) + " failed: " + what), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

struct Campaign {
  ScenarioConfig config;
  ScenarioKind scenario = ScenarioKind::MacroScheme1;
  int drops = 1;
  std::uint64_t base_seed = 0;
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::string out_dir;  // empty: nothing written
  bool dump = false;
  int workers = 0;      // 0: D2DSIM_WORKERS or hardware concurrency
};

struct SchemeSummary {
  Scheme scheme = Scheme::None;
  double cell_bps = 0.0;  // means over drops
  double d2d_bps = 0.0;
  double overall_bps = 0.0;
  double enabled_pairs = 0.0;
  GainSummary overall_gain;  // vs. the no-D2D baseline of the same drop
  GainSummary cell_gain;
};

struct TierSummary {
  std::string name;
  std::optional<SiteKind> tier;
  double baseline_bps = 0.0;  // cellular capacity without D2D
  std::vector<SchemeSummary> schemes;

  const SchemeSummary* find(Scheme s) const;
};

struct CampaignResult {
  ScenarioKind scenario = ScenarioKind::MacroScheme1;
  std::vector<Scheme> schemes;
  std::vector<DropResult> drops;  // index k ran with seed base + k
  std::vector<TierSummary> tiers;  // "all", plus "macro" and "micro" for hetnet

  const TierSummary& tier(std::string_view name) const;
};

/// Runs drops base..base+K-1 on a worker pool. Throws DropFailure for the
/// first failing seed. Writes CSV files and a summary when out_dir is set.
CampaignResult run_campaign(const Campaign& campaign);

std::vector<TierSummary> summarize(const std::vector<DropResult>& drops, const std::vector<Scheme>& schemes,
                                   bool split_tiers);

void write_summary(std::ostream& out, const CampaignResult& result);

int worker_count_from_env();

}  // namespace d2dsim
