#include "d2dsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "d2dsim/channel.hpp"
#include "d2dsim/power.hpp"
#include "d2dsim/scenario.hpp"
#include "d2dsim/units.hpp"

namespace d2dsim {

std::string_view scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::MacroScheme1: return "macro-only-scheme1";
    case ScenarioKind::MacroScheme2: return "macro-only-scheme2";
    case ScenarioKind::Hetnet: return "hetnet";
  }
  return "?";
}

std::optional<ScenarioKind> parse_scenario(std::string_view name) {
  for (auto k : {ScenarioKind::MacroScheme1, ScenarioKind::MacroScheme2, ScenarioKind::Hetnet}) {
    if (scenario_name(k) == name) return k;
  }
  return std::nullopt;
}

ScenarioConfig apply_scenario(const ScenarioConfig& base, ScenarioKind kind) {
  ScenarioConfig cfg = base;
  cfg.micro.enabled = kind == ScenarioKind::Hetnet;
  if (kind == ScenarioKind::MacroScheme2) cfg.snr_targets.d2d_db = cfg.snr_targets.d2d_scheme2_db;
  return cfg;
}

namespace {

const char* role_name(Role r) {
  switch (r) {
    case Role::Cellular: return "cellular";
    case Role::D2DTx: return "d2d-tx";
    case Role::D2DRx: return "d2d-rx";
  }
  return "?";
}

// Representative signaling run for the first measured-grid pair.
ProtocolTrace sample_trace(const ScenarioConfig& cfg, const Environment& env, const UserDrop& drop,
                           const std::vector<SectorMembers>& members, const std::vector<Allocation>& proposed,
                           const ChannelModel& channel) {
  ProtocolOptions opts;
  opts.discovery_model = cfg.signaling.discovery_model;
  opts.max_retries = cfg.signaling.max_retries;
  for (std::size_t s = 0; s < members.size(); ++s) {
    for (std::size_t m = 0; m < members[s].pairs.size(); ++m) {
      const D2DPair& p = drop.pairs[static_cast<std::size_t>(members[s].pairs[m])];
      const UserTerminal& tx = drop.users[static_cast<std::size_t>(p.tx)];
      const UserTerminal& rx = drop.users[static_cast<std::size_t>(p.rx)];
      if (!Environment::is_central(tx.grid)) continue;
      const Sector& stx = env.sectors[static_cast<std::size_t>(tx.serving_sector)];
      const Sector& srx = env.sectors[static_cast<std::size_t>(rx.serving_sector)];
      PairContext ctx;
      ctx.discoverer_position = tx.position;
      ctx.discoveree_position = rx.position;
      ctx.d2d_gain_db = linear_to_db(channel.user_user_gain(tx, rx, stx.carrier_hz));
      ctx.discoverer_cell_gain_db = channel.user_sector_gain_db(tx, stx);
      ctx.discoveree_cell_gain_db = channel.user_sector_gain_db(rx, srx);
      ctx.sector_cellular_users = members[s].cellular.size();
      const Verdict v = proposed[s].pair_to_resource[m] >= 0 ? Verdict::Accept : Verdict::Reject;
      if (stx.site == srx.site) return run_single_cell(ctx, v, opts);
      return run_multi_cell(ctx, v, v, opts);
    }
  }
  return {};
}

}  // namespace

DropResult run_drop(const ScenarioConfig& cfg, std::uint64_t seed, const std::vector<Scheme>& schemes,
                    const DropDump* dump) {
  DropResult result;
  result.seed = seed;

  Rng env_rng = substream(seed, "environment");
  const Environment env = generate_environment(cfg, env_rng);
  Rng user_rng = substream(seed, "users");
  UserDrop drop = drop_users(env, cfg, user_rng);
  const ChannelModel channel(env, cfg.channel, mix(seed, hash_label("shadowing")));

  const std::vector<int> serving = associate_users(drop.users, env, channel);
  for (std::size_t i = 0; i < drop.users.size(); ++i) drop.users[i].serving_sector = serving[i];

  Rng cell_rng = substream(seed, "snr-cellular");
  const std::vector<double> cell_targets = draw_snr_targets(cfg.snr_targets.cellular_db, drop.users.size(), cell_rng);
  Rng d2d_rng = substream(seed, "snr-d2d");
  const std::vector<double> d2d_targets = draw_snr_targets(cfg.snr_targets.d2d_db, drop.pairs.size(), d2d_rng);

  const std::vector<SectorMembers> members = group_by_sector(drop, env.sectors.size());

  DropStats& stats = result.stats;
  stats.users = drop.users.size();
  stats.pairs = drop.pairs.size();
  for (const auto& u : drop.users) {
    const bool central = Environment::is_central(u.grid);
    stats.central_users += central;
    stats.outage_users += u.serving_sector < 0;
    stats.central_cellular += central && u.role == Role::Cellular && u.serving_sector >= 0;
  }

  std::vector<SectorState> sectors;
  std::vector<FeasibilityMatrix> feasibility;
  std::size_t clipped = 0;
  std::size_t transmitters = 0;
  for (const SectorMembers& mem : members) {
    const Sector& sector = env.sectors[static_cast<std::size_t>(mem.sector)];
    SectorState st;
    st.sector = mem.sector;
    st.tier = sector.kind;
    const std::size_t M = mem.cellular.size();
    const std::size_t N = mem.pairs.size();
    st.resource_bandwidth_hz = sector.bandwidth_hz / static_cast<double>(std::max<std::size_t>(M, 1));
    st.noise.bs_w = noise_power_watts({cfg.noise_density_dbm_per_hz, sector.noise_figure_db, st.resource_bandwidth_hz});
    st.noise.ue_w = noise_power_watts({cfg.noise_density_dbm_per_hz, cfg.users.noise_figure_db, st.resource_bandwidth_hz});
    st.gains = build_gain_set(mem, drop, channel);

    std::vector<double> pair_targets;
    for (std::size_t n = 0; n < M; ++n) {
      UserTerminal& u = drop.users[static_cast<std::size_t>(mem.cellular[n])];
      const PowerAssignment pa = open_loop_power(cell_targets[static_cast<std::size_t>(u.id)], st.gains.h_cell[n],
                                                 st.noise.bs_w, cfg.users.max_tx_power_dbm);
      st.powers.cell.push_back(pa.tx_power_w);
      u.tx_power_dbm = watts_to_dbm(pa.tx_power_w);
      u.snr_target_db = pa.snr_target_db;
      const bool central = Environment::is_central(u.grid);
      st.cell_central.push_back(central);
      if (central) {
        ++transmitters;
        clipped += pa.clipped;
      }
    }
    for (std::size_t m = 0; m < N; ++m) {
      const D2DPair& p = drop.pairs[static_cast<std::size_t>(mem.pairs[m])];
      UserTerminal& tx = drop.users[static_cast<std::size_t>(p.tx)];
      const double target = d2d_targets[static_cast<std::size_t>(p.id)];
      const PowerAssignment pa = open_loop_power(target, st.gains.h_d2d[m], st.noise.ue_w, cfg.users.max_tx_power_dbm);
      st.powers.d2d.push_back(pa.tx_power_w);
      pair_targets.push_back(target);
      tx.tx_power_dbm = watts_to_dbm(pa.tx_power_w);
      tx.snr_target_db = target;
      const bool central = Environment::is_central(tx.grid);
      st.pair_central.push_back(central);
      stats.central_pairs += central;
      if (central) {
        ++transmitters;
        clipped += pa.clipped;
      }
    }

    ContextCriteria criteria;
    criteria.gamma_cell_db = cfg.rrm.gamma_cell_db;
    criteria.ratio = constant_ratio(cfg.rrm.distance_ratio);
    criteria.d2d_target_db = pair_targets;
    FeasibilityMatrix f = feasibility_context(context_distances(mem, drop), st.gains, st.powers, st.noise, criteria);
    for (std::size_t m = 0; m < N; ++m) {
      if (!st.pair_central[m]) continue;
      for (std::size_t n = 0; n < M; ++n) {
        ++stats.candidate_entries;
        stats.feasible_entries += f(m, n);
      }
    }

    if (dump && dump->gains) {
      std::ostream& out = *dump->gains;
      for (std::size_t n = 0; n < M; ++n)
        out << dump->drop_index << ',' << mem.sector << ",cell:" << mem.cellular[n] << ",h_cell," << linear_to_db(st.gains.h_cell[n]) << '\n';
      for (std::size_t m = 0; m < N; ++m) {
        out << dump->drop_index << ',' << mem.sector << ",pair:" << mem.pairs[m] << ",h_d2d," << linear_to_db(st.gains.h_d2d[m]) << '\n';
        out << dump->drop_index << ',' << mem.sector << ",pair:" << mem.pairs[m] << ",h_d2d_to_bs," << linear_to_db(st.gains.h_d2d_to_bs[m]) << '\n';
        for (std::size_t n = 0; n < M; ++n)
          out << dump->drop_index << ',' << mem.sector << ",cell:" << mem.cellular[n] << "->pair:" << mem.pairs[m] << ",h_cross,"
              << linear_to_db(st.gains.h_cross(m, n)) << '\n';
      }
    }
    if (dump && dump->feasibility) write_feasibility_csv(*dump->feasibility, mem.sector, f);

    feasibility.push_back(std::move(f));
    sectors.push_back(std::move(st));
  }
  const double clip_rate = transmitters ? static_cast<double>(clipped) / static_cast<double>(transmitters) : 0.0;

  if (dump && dump->powers) {
    for (const auto& u : drop.users) {
      if (u.serving_sector < 0 || u.role == Role::D2DRx) continue;
      *dump->powers << dump->drop_index << ',' << u.id << ',' << role_name(u.role) << ',' << u.serving_sector << ','
                    << u.tx_power_dbm << ',' << u.snr_target_db << ',' << (u.tx_power_dbm >= cfg.users.max_tx_power_dbm - 1e-9)
                    << '\n';
    }
  }

  auto allocate = [&](Scheme scheme) {
    std::vector<Allocation> out;
    for (std::size_t s = 0; s < sectors.size(); ++s) {
      const SectorState& st = sectors[s];
      switch (scheme) {
        case Scheme::Proposed:
          out.push_back(allocate_proposed(feasibility[s]));
          break;
        case Scheme::CapacityMax:
          out.push_back(allocate_capacity_max(st.gains, st.powers, st.noise.bs_w));
          break;
        case Scheme::Random: {
          Rng rng = substream(seed, "random-allocation", static_cast<std::uint64_t>(st.sector));
          out.push_back(allocate_random(st.gains.pair_count(), st.gains.cellular_count(), rng));
          break;
        }
        case Scheme::None:
          out.push_back(allocate_none(st.gains.pair_count()));
          break;
      }
      if (dump && dump->allocations) write_allocation_csv(*dump->allocations, dump->drop_index, st.sector, out.back());
    }
    return out;
  };

  {
    std::vector<Allocation> none;
    for (const auto& st : sectors) none.push_back(allocate_none(st.gains.pair_count()));
    result.baseline = evaluate_drop(Scheme::None, sectors, none, clip_rate);
  }
  std::vector<Allocation> proposed;
  for (Scheme scheme : schemes) {
    std::vector<Allocation> alloc = allocate(scheme);
    result.reports.push_back(evaluate_drop(scheme, sectors, alloc, clip_rate));
    if (scheme == Scheme::Proposed) proposed = std::move(alloc);
  }
  if (proposed.empty()) {
    for (const auto& f : feasibility) proposed.push_back(allocate_proposed(f));
  }
  result.trace = sample_trace(cfg, env, drop, members, proposed, channel);
  return result;
}


int worker_count_from_env() {
  if (const char* v = std::getenv("D2DSIM_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

const SchemeSummary* TierSummary::find(Scheme s) const {
  for (const auto& x : schemes)
    if (x.scheme == s) return &x;
  return nullptr;
}

const TierSummary& CampaignResult::tier(std::string_view name) const {
  for (const auto& t : tiers)
    if (t.name == name) return t;
  throw std::out_of_range("no tier " + std::string(name));
}

std::vector<TierSummary> summarize(const std::vector<DropResult>& drops, const std::vector<Scheme>& schemes,
                                   bool split_tiers) {
  std::vector<std::pair<std::string, std::optional<SiteKind>>> tiers{{"all", std::nullopt}};
  if (split_tiers) {
    tiers.emplace_back("macro", SiteKind::Macro);
    tiers.emplace_back("micro", SiteKind::Micro);
  }
  std::vector<TierSummary> out;
  const double k = drops.empty() ? 1.0 : static_cast<double>(drops.size());
  for (const auto& [name, tier] : tiers) {
    TierSummary ts;
    ts.name = name;
    ts.tier = tier;
    std::vector<double> base;
    for (const auto& d : drops) {
      base.push_back(d.baseline.tier(tier).cell_bps);
      ts.baseline_bps += base.back() / k;
    }
    for (std::size_t i = 0; i < schemes.size(); ++i) {
      SchemeSummary ss;
      ss.scheme = schemes[i];
      std::vector<double> overall, cell;
      for (const auto& d : drops) {
        const CapacityTotals& t = d.reports[i].tier(tier);
        ss.cell_bps += t.cell_bps / k;
        ss.d2d_bps += t.d2d_bps / k;
        ss.overall_bps += t.overall_bps() / k;
        ss.enabled_pairs += static_cast<double>(t.enabled_pairs) / k;
        overall.push_back(t.overall_bps());
        cell.push_back(t.cell_bps);
      }
      ss.overall_gain = relative_gain(overall, base);
      ss.cell_gain = relative_gain(cell, base);
      ts.schemes.push_back(ss);
    }
    out.push_back(std::move(ts));
  }
  return out;
}

void write_summary(std::ostream& out, const CampaignResult& result) {
  char line[256];
  out << "scenario " << scenario_name(result.scenario) << "\n";
  out << "drops " << result.drops.size() << "\n";
  for (const auto& t : result.tiers) {
    std::snprintf(line, sizeof line, "\n[%s] baseline cellular %.3f Mbit/s\n", t.name.c_str(), t.baseline_bps / 1e6);
    out << line;
    out << "scheme         cell_mbps  d2d_mbps  overall_mbps  pairs   overall_gain         cell_gain\n";
    for (const auto& s : t.schemes) {
      std::snprintf(line, sizeof line, "%-13s %10.3f %9.3f %13.3f %6.2f %+8.2f%% +-%5.2f %+8.2f%% +-%5.2f\n",
                    std::string(scheme_name(s.scheme)).c_str(), s.cell_bps / 1e6, s.d2d_bps / 1e6, s.overall_bps / 1e6,
                    s.enabled_pairs, 100 * s.overall_gain.mean, 100 * s.overall_gain.ci95, 100 * s.cell_gain.mean,
                    100 * s.cell_gain.ci95);
      out << line;
    }
  }
}

namespace {

struct DumpFiles {
  std::ofstream gains, powers, feasibility, allocations;
};

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

CampaignResult run_campaign(const Campaign& campaign) {
  const ScenarioConfig cfg = apply_scenario(campaign.config, campaign.scenario);
  CampaignResult result;
  result.scenario = campaign.scenario;
  result.schemes = campaign.schemes;
  const std::size_t K = static_cast<std::size_t>(std::max(campaign.drops, 0));
  result.drops.resize(K);

  const std::filesystem::path dir = campaign.out_dir;
  if (!campaign.out_dir.empty()) std::filesystem::create_directories(dir);

  std::vector<std::string> errors(K);
  std::vector<std::ostringstream> dumps;
  if (campaign.dump) dumps.resize(K * 4);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t k; !failed && (k = next++) < K;) {
      const std::uint64_t seed = campaign.base_seed + k;
      try {
        if (campaign.dump) {
          DropDump dd{&dumps[4 * k], &dumps[4 * k + 1], &dumps[4 * k + 2], &dumps[4 * k + 3], static_cast<int>(k)};
          result.drops[k] = run_drop(cfg, seed, campaign.schemes, &dd);
        } else {
          result.drops[k] = run_drop(cfg, seed, campaign.schemes);
        }
      } catch (const std::exception& e) {
        errors[k] = e.what();
        failed = true;
      }
    }
  };
  int workers = campaign.workers > 0 ? campaign.workers : worker_count_from_env();
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(K, 1)));
  {
    std::vector<std::jthread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (!errors[k].empty()) throw DropFailure(campaign.base_seed + k, errors[k]);
  }

  const bool split = campaign.scenario == ScenarioKind::Hetnet;
  result.tiers = summarize(result.drops, result.schemes, split);

  if (campaign.out_dir.empty()) return result;

  auto write_drops = [&](const std::string& name, std::optional<SiteKind> tier) {
    std::ofstream f = open_out(dir / name);
    write_report_csv_header(f);
    for (std::size_t k = 0; k < K; ++k)
      for (const auto& r : result.drops[k].reports) write_report_csv_row(f, static_cast<int>(k), r, tier);
  };
  write_drops("drops.csv", std::nullopt);
  if (split) {
    write_drops("drops_macro.csv", SiteKind::Macro);
    write_drops("drops_micro.csv", SiteKind::Micro);
  }
  {
    std::ofstream f = open_out(dir / "summary.txt");
    write_summary(f, result);
  }
  {
    std::ofstream f = open_out(dir / "traces.txt");
    for (std::size_t k = 0; k < K; ++k) {
      if (result.drops[k].trace.steps.empty()) continue;
      f << "# drop " << k << "\n";
      write_trace(f, result.drops[k].trace);
    }
  }
  if (campaign.dump) {
    const char* names[] = {"gains.csv", "powers.csv", "feasibility.csv", "allocations.csv"};
    const char* headers[] = {"drop,sector,link,kind,gain_db\n", "drop,user,role,sector,tx_power_dbm,snr_target_db,clipped\n",
                             nullptr, nullptr};
    for (int i = 0; i < 4; ++i) {
      std::ofstream f = open_out(dir / names[i]);
      if (i == 2) {
        f << "drop,";
        write_feasibility_csv_header(f);
      } else if (i == 3) {
        write_allocation_csv_header(f);
      } else {
        f << headers[i];
      }
      for (std::size_t k = 0; k < K; ++k) {
        if (i == 2) {
          // prefix each feasibility row with the drop index
          std::istringstream in(dumps[4 * k + 2].str());
          for (std::string row; std::getline(in, row);) f << k << ',' << row << '\n';
        } else {
          f << dumps[4 * k + i].str();
        }
      }
    }
  }
  return result;
}

}  // namespace d2dsim
