#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "d2dsim/engine.hpp"

using namespace d2dsim;
namespace fs = std::filesystem;

namespace {

ScenarioConfig small_config(ScenarioKind kind = ScenarioKind::MacroScheme1) {
  ScenarioConfig cfg = apply_scenario(default_config(), kind);
  cfg.users.fixed_count_per_grid = 60;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("d2dsim_engine_" + name);
  fs::remove_all(p);
  return p;
}

const std::vector<Scheme> kSchemes{std::begin(kAllSchemes), std::end(kAllSchemes)};

}  // namespace

TEST(Engine, ScenarioNames) {
  for (ScenarioKind k : {ScenarioKind::MacroScheme1, ScenarioKind::MacroScheme2, ScenarioKind::Hetnet}) {
    EXPECT_EQ(parse_scenario(scenario_name(k)), k);
  }
  EXPECT_FALSE(parse_scenario("femto"));
  EXPECT_FALSE(apply_scenario(default_config(), ScenarioKind::MacroScheme2).micro.enabled);
  EXPECT_TRUE(apply_scenario(default_config(), ScenarioKind::Hetnet).micro.enabled);
  EXPECT_EQ(apply_scenario(default_config(), ScenarioKind::MacroScheme2).snr_targets.d2d_db.lower, 7.0);
}

TEST(Engine, DropIsDeterministic) {
  const ScenarioConfig cfg = small_config();
  const DropResult a = run_drop(cfg, 17, kSchemes);
  const DropResult b = run_drop(cfg, 17, kSchemes);
  ASSERT_EQ(a.reports.size(), kSchemes.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    EXPECT_EQ(a.reports[i].all.overall_bps(), b.reports[i].all.overall_bps());
    EXPECT_EQ(a.reports[i].cell_sinr_db, b.reports[i].cell_sinr_db);
  }
  EXPECT_EQ(trace_to_string(a.trace), trace_to_string(b.trace));
}

TEST(Engine, SchemesShareTheDrop) {
  const DropResult r = run_drop(small_config(), 3, kSchemes);
  for (const CapacityReport& rep : r.reports) {
    EXPECT_EQ(rep.baseline_sinr_db, r.baseline.baseline_sinr_db);
    if (rep.scheme == Scheme::None) {
      EXPECT_EQ(rep.all.cell_bps, r.baseline.all.cell_bps);
      EXPECT_EQ(rep.all.d2d_bps, 0.0);
    } else {
      // reuse only ever lowers a cellular link
      for (std::size_t i = 0; i < rep.cell_sinr_db.size(); ++i) EXPECT_LE(rep.cell_sinr_db[i], rep.baseline_sinr_db[i]);
    }
  }
}

TEST(Engine, RandomSchemeDoesNotPerturbOthers) {
  const ScenarioConfig cfg = small_config();
  const DropResult all = run_drop(cfg, 9, kSchemes);
  const DropResult only = run_drop(cfg, 9, {Scheme::Proposed});
  const auto it = std::find_if(all.reports.begin(), all.reports.end(),
                               [](const CapacityReport& r) { return r.scheme == Scheme::Proposed; });
  ASSERT_NE(it, all.reports.end());
  EXPECT_EQ(it->all.overall_bps(), only.reports[0].all.overall_bps());
}

TEST(Engine, SingleDropCampaignMatchesRunDrop) {
  Campaign c;
  c.config = small_config();
  c.drops = 1;
  c.base_seed = 42;
  c.workers = 1;
  const CampaignResult res = run_campaign(c);
  const DropResult d = run_drop(c.config, 42, c.schemes);
  ASSERT_EQ(res.drops.size(), 1u);
  EXPECT_EQ(res.drops[0].seed, 42u);
  for (std::size_t i = 0; i < d.reports.size(); ++i)
    EXPECT_EQ(res.drops[0].reports[i].all.overall_bps(), d.reports[i].all.overall_bps());
  const SchemeSummary* s = res.tier("all").find(Scheme::Proposed);
  ASSERT_NE(s, nullptr);
  for (const CapacityReport& r : d.reports)
    if (r.scheme == Scheme::Proposed) EXPECT_EQ(s->overall_bps, r.all.overall_bps());
}

TEST(Engine, WorkerCountDoesNotChangeResults) {
  Campaign c;
  c.config = small_config();
  c.drops = 6;
  c.base_seed = 5;
  c.workers = 1;
  const CampaignResult one = run_campaign(c);
  c.workers = 4;
  const CampaignResult four = run_campaign(c);
  for (std::size_t k = 0; k < one.drops.size(); ++k) {
    EXPECT_EQ(one.drops[k].seed, 5 + k);
    for (std::size_t i = 0; i < kSchemes.size(); ++i)
      EXPECT_EQ(one.drops[k].reports[i].all.overall_bps(), four.drops[k].reports[i].all.overall_bps());
  }
}

TEST(Engine, HetnetHasTiers) {
  Campaign c;
  c.config = small_config(ScenarioKind::Hetnet);
  c.scenario = ScenarioKind::Hetnet;
  c.drops = 2;
  const CampaignResult res = run_campaign(c);
  ASSERT_EQ(res.tiers.size(), 3u);
  EXPECT_NO_THROW(res.tier("macro"));
  EXPECT_NO_THROW(res.tier("micro"));
  for (const DropResult& d : res.drops) {
    const CapacityReport& b = d.baseline;
    EXPECT_NEAR(b.all.cell_bps, b.macro.cell_bps + b.micro.cell_bps, 1e-6 * b.all.cell_bps);
    EXPECT_GT(b.micro.cell_bps, 0.0);
  }
}

TEST(Engine, RerunWritesIdenticalFiles) {
  Campaign c;
  c.config = small_config();
  c.drops = 3;
  c.dump = true;
  const fs::path a = scratch_dir("a");
  const fs::path b = scratch_dir("b");
  c.out_dir = a.string();
  run_campaign(c);
  c.out_dir = b.string();
  c.workers = 2;
  run_campaign(c);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path other = b / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
    ++files;
  }
  EXPECT_GE(files, 7u);
  const std::string drops = slurp(b / "drops.csv");
  EXPECT_EQ(drops.rfind("drop,scheme,cell_bps", 0), 0u);
}

TEST(Engine, SummaryText) {
  Campaign c;
  c.config = small_config();
  c.drops = 2;
  std::ostringstream os;
  write_summary(os, run_campaign(c));
  EXPECT_NE(os.str().find("scenario"), std::string::npos);
  EXPECT_NE(os.str().find("proposed"), std::string::npos);
}

TEST(Engine, ShippedConfigIsTheDefault) {
  const ScenarioConfig file = load_config(std::string(D2DSIM_CONFIG_DIR) + "/default.json");
  for (ScenarioKind k : {ScenarioKind::MacroScheme1, ScenarioKind::Hetnet}) {
    const DropResult a = run_drop(apply_scenario(file, k), 2, kSchemes);
    const DropResult b = run_drop(apply_scenario(default_config(), k), 2, kSchemes);
    for (std::size_t i = 0; i < kSchemes.size(); ++i)
      EXPECT_EQ(a.reports[i].all.overall_bps(), b.reports[i].all.overall_bps());
  }
}
