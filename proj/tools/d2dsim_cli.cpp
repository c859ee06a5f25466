#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d2dsim/assignment.hpp"
#include "d2dsim/config.hpp"
#include "d2dsim/engine.hpp"
#include "d2dsim/matching.hpp"
#include "d2dsim/random.hpp"
#include "d2dsim/signaling.hpp"

using namespace d2dsim;

namespace {

std::vector<Scheme> parse_scheme_list(const std::string& list) {
  std::vector<Scheme> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    if (item == "all") {
      out.assign(std::begin(kAllSchemes), std::end(kAllSchemes));
      continue;
    }
    auto s = parse_scheme(item);
    if (!s) throw CLI::ValidationError("--scheme", "unknown scheme '" + item + "'");
    out.push_back(*s);
  }
  if (out.empty()) throw CLI::ValidationError("--scheme", "no schemes given");
  return out;
}

ScenarioConfig config_from(const std::string& path) {
  ScenarioConfig cfg = path.empty() ? default_config() : load_config(path);
  validate_config(cfg);
  return cfg;
}

int cmd_run(const std::string& config, int drops, std::optional<std::uint64_t> seed, const std::string& schemes,
            const std::string& scenario, const std::string& out, bool dump) {
  Campaign c;
  c.config = config_from(config);
  c.drops = drops > 0 ? drops : c.config.drops;
  c.base_seed = seed.value_or(c.config.seed);
  c.schemes = parse_scheme_list(schemes);
  auto kind = parse_scenario(scenario);
  if (!kind) {
    std::cerr << "error: unknown scenario '" << scenario << "'\n";
    return 2;
  }
  c.scenario = *kind;
  c.out_dir = out;
  c.dump = dump;
  c.workers = worker_count_from_env();
  std::cerr << "running " << c.drops << " drops of " << scenario << " from seed " << c.base_seed << " on "
            << c.workers << " workers\n";
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult r = run_campaign(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_summary(std::cout, r);
  std::cerr << "done in " << secs << " s\n";
  return 0;
}

int cmd_trace(const std::string& out_dir, char model) {
  ProtocolOptions opts;
  opts.discovery_model = model;
  const PairContext ctx = reference_pair_context();
  const ProtocolTrace single = run_single_cell(ctx, Verdict::Accept, opts);
  const ProtocolTrace multi = run_multi_cell(ctx, Verdict::Accept, Verdict::Accept, opts);
  if (out_dir.empty()) {
    write_trace(std::cout, single);
    write_trace(std::cout, multi);
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream(std::filesystem::path(out_dir) / "single_cell.trace") << trace_to_string(single);
  std::ofstream(std::filesystem::path(out_dir) / "multi_cell.trace") << trace_to_string(multi);
  return 0;
}

int cmd_oracle(int instances, std::uint64_t seed) {
  Rng rng = substream(seed, "oracle");
  std::uniform_int_distribution<int> size(1, 6);
  std::bernoulli_distribution edge(0.4);
  int matching_bad = 0;
  for (int i = 0; i < instances; ++i) {
    Matrix<std::uint8_t> a(static_cast<std::size_t>(size(rng)), static_cast<std::size_t>(size(rng)));
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = edge(rng);
    const auto fast = lexicographic_max_matching(a);
    const auto slow = brute_force_max_matching(a);
    if (fast.size != slow.size || fast.row_to_col != slow.row_to_col) ++matching_bad;
  }
  std::uniform_real_distribution<double> w(-5.0, 5.0);
  int assignment_bad = 0;
  for (int i = 0; i < instances; ++i) {
    Matrix<double> m(static_cast<std::size_t>(size(rng)), static_cast<std::size_t>(size(rng)));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = w(rng);
    const double fast = solve_max_assignment(m).total;
    const double slow = brute_force_max_assignment(m).total;
    if (std::abs(fast - slow) > 1e-9 * std::max(1.0, std::abs(slow))) ++assignment_bad;
  }
  std::printf("matching   %d instances, %d mismatches\n", instances, matching_bad);
  std::printf("assignment %d instances, %d mismatches\n", instances, assignment_bad);
  return matching_bad + assignment_bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D2D underlay system-level simulator"};
  app.require_subcommand(1);

  std::string config, schemes = "all", scenario = "macro-only-scheme1", out;
  int drops = 0;
  std::optional<std::uint64_t> seed;
  bool dump = false;
  auto* run = app.add_subcommand("run", "run a Monte Carlo campaign");
  run->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
  run->add_option("--drops", drops, "number of drops (default from config)")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "base seed");
  run->add_option("--scheme", schemes, "comma separated: none,proposed,capacity-max,random or all");
  run->add_option("--scenario", scenario, "macro-only-scheme1, macro-only-scheme2 or hetnet");
  run->add_option("--out", out, "output directory for CSV files");
  run->add_flag("--dump", dump, "also write per-drop gains, powers, feasibility and allocations");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate-config", "check a config file");
  validate->add_option("config,--config", validate_path, "JSON config file")->required();

  std::string trace_out;
  std::string model = "A";
  auto* trace = app.add_subcommand("trace-protocol", "write reference signaling traces");
  trace->add_option("--out", trace_out, "directory for single_cell.trace and multi_cell.trace");
  trace->add_option("--discovery", model, "discovery model")->check(CLI::IsMember({"A", "B"}));

  int instances = 1000;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "compare solvers against brute force on small instances");
  oracle->add_option("--instances", instances, "instances per solver")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, drops, seed, schemes, scenario, out, dump);
    if (*validate) {
      validate_config(load_config(validate_path));
      std::cout << validate_path << ": ok\n";
      return 0;
    }
    if (*trace) return cmd_trace(trace_out, model[0]);
    if (*oracle) return cmd_oracle(instances, oracle_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DropFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
