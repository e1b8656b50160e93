// Unit tests for the experiment harness: config parsing with precise error
// reporting, per-horizon materialization, summary/report CSV round-trips,
// deterministic multi-seed execution and the CLI entry point.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "planpace/harness.hpp"
#include "planpace/oracles.hpp"

using namespace planpace;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path base = [] {
    fs::path dir = fs::temp_directory_path() / "planpace_harness_tests";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
  }();
  static int counter = 0;
  fs::path sub = base / ("case" + std::to_string(counter++));
  fs::create_directories(sub);
  return sub;
}

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& content) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << content;
  return path;
}

// Loads a config expected to fail; returns the error message.
std::string load_error(const fs::path& path) {
  try {
    load_config(path.string());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("expected a config error for " << path.string());
  return {};
}

const std::string kValidConfig = R"(# minimal valid experiment
[instance]
T = 40
K = 3
m = 1
rho = 0.25

[plan]
kind = uniform

[environment]
kind = stationary
noise = bernoulli
seed = 7
rewards = [0, 0.7, 0.4]
costs = [0, 0.5, 0.2]

[algorithm]
setting = ORA
)";

std::string replace_once(std::string text, const std::string& from,
                         const std::string& to) {
  const std::size_t at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

ExperimentConfig small_config(const fs::path& out_dir) {
  ExperimentConfig cfg;
  cfg.horizon = 60;
  cfg.num_arms = 3;
  cfg.num_resources = 1;
  cfg.rho = 0.3;
  cfg.plan.kind = PlanKind::Uniform;
  cfg.environment.kind = EnvKind::Stationary;
  cfg.environment.noise = NoiseModel::Bernoulli;
  cfg.environment.seed = 5;
  MeanPhase phase;
  phase.reward_means = {0.0, 0.8, 0.3};
  phase.cost_means = {{0.0}, {0.5}, {0.1}};
  cfg.environment.phases = {phase};
  cfg.algorithm.setting = Setting::Ora;
  cfg.seeds = {1, 2, 3};
  cfg.horizons = {60};
  cfg.out_dir = out_dir.string();
  return cfg;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "planpace");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (std::string& arg : args) argv.push_back(arg.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

// ---------------------------------------------------------------------------
// Config loading.
// ---------------------------------------------------------------------------

TEST_CASE("a minimal config loads with documented defaults") {
  const fs::path dir = scratch_dir();
  const fs::path path = write_file(dir, "ok.cfg", kValidConfig);
  const ExperimentConfig cfg = load_config(path.string());
  CHECK(cfg.horizon == 40);
  CHECK(cfg.num_arms == 3);
  CHECK(cfg.num_resources == 1);
  CHECK(cfg.rho == doctest::Approx(0.25));
  CHECK(cfg.budget < 0.0);  // rho form leaves B unset
  CHECK(cfg.plan.kind == PlanKind::Uniform);
  CHECK(cfg.environment.seed == 7);
  CHECK(cfg.algorithm.setting == Setting::Ora);
  CHECK(cfg.algorithm.delta == doctest::Approx(0.05));
  CHECK(cfg.meta_mode == MetaMode::Auto);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1});  // default seed list
  CHECK(cfg.horizons == std::vector<std::size_t>{40});
  CHECK(cfg.out_dir == "out");
  CHECK_FALSE(cfg.dump_traces);
  CHECK_FALSE(cfg.has_eps);
}

TEST_CASE("missing sections and unknown names are reported precisely") {
  const fs::path dir = scratch_dir();

  std::string no_plan = kValidConfig;
  no_plan = replace_once(no_plan, "[plan]\nkind = uniform\n", "");
  std::string msg = load_error(write_file(dir, "no_plan.cfg", no_plan));
  CHECK(msg.find("[plan]") != std::string::npos);

  std::string bad_key =
      replace_once(kValidConfig, "T = 40", "T = 40\nbogus_knob = 3");
  msg = load_error(write_file(dir, "bad_key.cfg", bad_key));
  CHECK(msg.find("bogus_knob") != std::string::npos);
  CHECK(msg.find("line 4") != std::string::npos);

  std::string bad_section = kValidConfig + "\n[telemetry]\nrate = 1\n";
  msg = load_error(write_file(dir, "bad_section.cfg", bad_section));
  CHECK(msg.find("[telemetry]") != std::string::npos);

  std::string dup = replace_once(kValidConfig, "K = 3", "K = 3\nK = 4");
  msg = load_error(write_file(dir, "dup.cfg", dup));
  CHECK(msg.find("duplicate key 'K'") != std::string::npos);
}

TEST_CASE("budget form is exclusive-or") {
  const fs::path dir = scratch_dir();
  std::string both = replace_once(kValidConfig, "rho = 0.25",
                                  "rho = 0.25\nB = 10");
  CHECK(load_error(write_file(dir, "both.cfg", both))
            .find("exactly one of B") != std::string::npos);
  std::string neither = replace_once(kValidConfig, "rho = 0.25\n", "");
  CHECK(load_error(write_file(dir, "neither.cfg", neither))
            .find("exactly one of B") != std::string::npos);
}

TEST_CASE("parameter range violations fail at load time") {
  const fs::path dir = scratch_dir();
  std::string bad_delta =
      replace_once(kValidConfig, "setting = ORA", "setting = ORA\ndelta = 1.5");
  CHECK(load_error(write_file(dir, "delta.cfg", bad_delta))
            .find("delta") != std::string::npos);

  std::string bad_rho = replace_once(kValidConfig, "rho = 0.25", "rho = 1.75");
  CHECK(load_error(write_file(dir, "rho.cfg", bad_rho)).find("rho") !=
        std::string::npos);

  std::string seeds_and_count =
      kValidConfig + "\n[runs]\nseeds = [1, 2]\ncount = 5\n";
  CHECK(load_error(write_file(dir, "runs.cfg", seeds_and_count))
            .find("seeds or count") != std::string::npos);

  std::string dup_seeds = kValidConfig + "\n[runs]\nseeds = [3, 3]\n";
  CHECK(load_error(write_file(dir, "dup_seeds.cfg", dup_seeds))
            .find("duplicate seeds") != std::string::npos);
}

TEST_CASE("count expands to the canonical seed list") {
  const fs::path dir = scratch_dir();
  const fs::path path = write_file(
      dir, "count.cfg", kValidConfig + "\n[runs]\ncount = 4\nhorizons = [40, 80]\n");
  const ExperimentConfig cfg = load_config(path.string());
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK(cfg.horizons == std::vector<std::size_t>{40, 80});
}

TEST_CASE("custom plan matrices resolve relative to the config file") {
  const fs::path dir = scratch_dir();
  write_file(dir, "plan.csv", "0.25, 0.25, 0.25, 0.25\n");
  std::string text = kValidConfig;
  text = replace_once(text, "T = 40", "T = 4");
  text = replace_once(text, "rho = 0.25", "B = 1");
  text = replace_once(text, "kind = uniform",
                      "kind = custom\nmatrix_csv = \"plan.csv\"");
  const ExperimentConfig cfg =
      load_config(write_file(dir, "custom.cfg", text).string());
  REQUIRE(cfg.plan.matrix.size() == 1);
  CHECK(cfg.plan.matrix[0] == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  const Instance inst = instantiate_instance(cfg, 4);
  CHECK(inst.plan.entry(0, 3) == doctest::Approx(0.25));

  std::string stray = replace_once(kValidConfig, "kind = uniform",
                                   "kind = uniform\nmatrix_csv = \"plan.csv\"");
  CHECK(load_error(write_file(dir, "stray.cfg", stray))
            .find("only valid with kind = custom") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Materialization.
// ---------------------------------------------------------------------------

TEST_CASE("budget_for scales rho by the horizon but keeps B fixed") {
  ExperimentConfig rho_cfg;
  rho_cfg.rho = 0.25;
  CHECK(budget_for(rho_cfg, 100) == doctest::Approx(25.0));
  CHECK(budget_for(rho_cfg, 400) == doctest::Approx(100.0));
  ExperimentConfig b_cfg;
  b_cfg.budget = 12.0;
  CHECK(budget_for(b_cfg, 100) == doctest::Approx(12.0));
  CHECK(budget_for(b_cfg, 400) == doctest::Approx(12.0));
}

TEST_CASE("fractional boundaries rescale with the horizon") {
  const fs::path dir = scratch_dir();
  std::string text = R"([instance]
T = 100
K = 2
m = 1
rho = 0.5

[plan]
kind = uniform

[environment]
kind = piecewise
seed = 1
boundaries_frac = [0.5, 1.0]

[environment.phase0]
rewards = [0, 0.9]
costs = [0, 0.5]

[environment.phase1]
rewards = [0, 0.1]
costs = [0, 0.5]

[algorithm]
setting = ORA

[runs]
horizons = [100, 200]
)";
  const ExperimentConfig cfg =
      load_config(write_file(dir, "frac.cfg", text).string());
  const EnvironmentSpec at100 = instantiate_environment(cfg, 100);
  CHECK(at100.phase_boundaries == std::vector<std::size_t>{50, 100});
  const EnvironmentSpec at200 = instantiate_environment(cfg, 200);
  CHECK(at200.phase_boundaries == std::vector<std::size_t>{100, 200});
}

TEST_CASE("absolute boundaries refuse to sweep") {
  const fs::path dir = scratch_dir();
  std::string text = R"([instance]
T = 100
K = 2
m = 1
rho = 0.5

[plan]
kind = uniform

[environment]
kind = piecewise
seed = 1
boundaries = [50, 100]

[environment.phase0]
rewards = [0, 0.9]
costs = [0, 0.5]

[environment.phase1]
rewards = [0, 0.1]
costs = [0, 0.5]

[algorithm]
setting = ORA
)";
  const ExperimentConfig cfg =
      load_config(write_file(dir, "abs.cfg", text).string());
  CHECK(instantiate_environment(cfg, 100).phase_boundaries ==
        std::vector<std::size_t>{50, 100});
  try {
    instantiate_environment(cfg, 200);
    FAIL("expected a config error for the mismatched horizon");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("boundaries_frac") != std::string::npos);
  }
}

TEST_CASE("resolve_meta applies the documented auto rule") {
  ExperimentConfig cfg = small_config(scratch_dir());
  // Uniform plan: rho_min = rho > rho / T^{1/4}, so auto stays off.
  Instance uniform_inst = instantiate_instance(cfg, 60);
  CHECK_FALSE(resolve_meta(cfg, uniform_inst));
  cfg.meta_mode = MetaMode::On;
  CHECK(resolve_meta(cfg, uniform_inst));
  cfg.meta_mode = MetaMode::Off;
  CHECK_FALSE(resolve_meta(cfg, uniform_inst));

  // Spiky plan at the default scale 0.5: rho_min <= rho / T^{1/4}.
  cfg.meta_mode = MetaMode::Auto;
  cfg.plan.kind = PlanKind::Spiky;
  Instance spiky_inst = instantiate_instance(cfg, 60);
  CHECK(resolve_meta(cfg, spiky_inst));
  // Void-skip claims the instance instead.
  cfg.algorithm.void_skip = true;
  CHECK_FALSE(resolve_meta(cfg, spiky_inst));
}

// ---------------------------------------------------------------------------
// Summary CSV.
// ---------------------------------------------------------------------------

TEST_CASE("summary rows survive a write/read round trip") {
  std::vector<SummaryRow> rows(2);
  rows[0].algorithm = "dual";
  rows[0].setting = Setting::Ora;
  rows[0].horizon = 100;
  rows[0].seed = 7;
  rows[0].total_reward = 51.25;
  rows[0].opt_dynamic = 50.0;
  rows[0].opt_static = 49.5;
  rows[0].dynamic_regret = -1.25;  // lucky path: negative is preserved
  rows[0].static_regret = -1.75;
  rows[0].tau = 99;
  rows[0].theoretical_bound = 812.5;
  rows[0].rho_min_used = 0.25;
  rows[0].meta_applied = false;
  rows[1].algorithm = "primal_dual_full";
  rows[1].setting = Setting::OlrcFull;
  rows[1].horizon = 200;
  rows[1].seed = 8;
  rows[1].total_reward = 80.0;
  rows[1].opt_dynamic = 90.0;
  rows[1].opt_static = 85.0;
  rows[1].dynamic_regret = 10.0;
  rows[1].static_regret = 5.0;
  rows[1].tau = 200;
  rows[1].theoretical_bound = 1234.5;
  rows[1].rho_min_used = 0.125;
  rows[1].meta_applied = true;

  std::stringstream buf;
  write_summary_csv(buf, rows);
  std::string first_line;
  std::getline(buf, first_line);
  CHECK(first_line == kSummaryHeader);
  buf.seekg(0);

  std::size_t malformed = 99;
  const std::vector<SummaryRow> back = read_summary_csv(buf, &malformed);
  CHECK(malformed == 0);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].algorithm == rows[i].algorithm);
    CHECK(back[i].setting == rows[i].setting);
    CHECK(back[i].horizon == rows[i].horizon);
    CHECK(back[i].seed == rows[i].seed);
    CHECK(back[i].total_reward == doctest::Approx(rows[i].total_reward));
    CHECK(back[i].dynamic_regret == doctest::Approx(rows[i].dynamic_regret));
    CHECK(back[i].static_regret == doctest::Approx(rows[i].static_regret));
    CHECK(back[i].tau == rows[i].tau);
    CHECK(back[i].theoretical_bound ==
          doctest::Approx(rows[i].theoretical_bound));
    CHECK(back[i].rho_min_used == doctest::Approx(rows[i].rho_min_used));
    CHECK(back[i].meta_applied == rows[i].meta_applied);
  }
}

TEST_CASE("malformed summary rows are counted, not fatal") {
  std::stringstream buf;
  buf << kSummaryHeader << "\n"
      << "dual,ORA,100,1,50,50,49,0,1,100,800,0.25,0\n"   // good
      << "dual,ORA,100,2,50,50,49,0,1,100,800,0.25\n"     // 12 cells
      << "dual,BOGUS,100,3,50,50,49,0,1,100,800,0.25,0\n" // bad setting
      << "dual,ORA,100,x,50,50,49,0,1,100,800,0.25,0\n"   // bad seed
      << "\n"                                             // blank: ignored
      << "dual,ORA,200,4,60,70,69,10,9,200,900,0.25,1\n"; // good
  std::size_t malformed = 0;
  const std::vector<SummaryRow> rows = read_summary_csv(buf, &malformed);
  CHECK(malformed == 3);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].horizon == 200);
  CHECK(rows[1].meta_applied);
}

// ---------------------------------------------------------------------------
// Report aggregation.
// ---------------------------------------------------------------------------

TEST_CASE("aggregate_rows computes grouped medians and paired ratios") {
  std::vector<SummaryRow> rows;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    SummaryRow base;
    base.algorithm = "dual";
    base.setting = Setting::Ora;
    base.horizon = 100;
    base.seed = seed;
    base.dynamic_regret = static_cast<double>(seed);  // 1, 2, 3, 4
    base.static_regret = 1000.0;  // ignored for the ORA setting
    base.theoretical_bound = 10.0 * static_cast<double>(seed);
    rows.push_back(base);
    base.horizon = 400;
    base.dynamic_regret = 2.0 * static_cast<double>(seed);  // paired x2
    rows.push_back(base);
  }
  const std::vector<ReportRow> report = aggregate_rows(rows);
  REQUIRE(report.size() == 2);
  const ReportRow& small = report[0];
  CHECK(small.horizon == 100);
  CHECK(small.count == 4);
  CHECK(small.median_regret == doctest::Approx(2.5));
  // Interpolated quartiles of {1,2,3,4}: q25 = 1.75, q75 = 3.25.
  CHECK(small.iqr_regret == doctest::Approx(1.5));
  CHECK(small.median_bound == doctest::Approx(25.0));
  CHECK(small.bound_over_regret == doctest::Approx(25.0 / 2.5));
  CHECK(small.sublinearity_ratio == doctest::Approx(0.0));  // no T/4 group
  const ReportRow& big = report[1];
  CHECK(big.horizon == 400);
  CHECK(big.sublinearity_ratio == doctest::Approx(2.0));  // per-seed pairing
}

TEST_CASE("aggregation uses static regret for the OLRC settings") {
  std::vector<SummaryRow> rows(1);
  rows[0].algorithm = "primal_dual_full";
  rows[0].setting = Setting::OlrcFull;
  rows[0].horizon = 50;
  rows[0].dynamic_regret = 111.0;
  rows[0].static_regret = 3.0;
  const std::vector<ReportRow> report = aggregate_rows(rows);
  REQUIRE(report.size() == 1);
  CHECK(report[0].median_regret == doctest::Approx(3.0));
  CHECK(report[0].iqr_regret == doctest::Approx(0.0));
}

TEST_CASE("aggregate_rows rejects an empty input") {
  try {
    aggregate_rows({});
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("the SVG report renders every series") {
  std::vector<ReportRow> report(2);
  report[0].algorithm = "dual";
  report[0].setting = Setting::Ora;
  report[0].horizon = 100;
  report[0].median_regret = 10.0;
  report[1] = report[0];
  report[1].horizon = 400;
  report[1].median_regret = 20.0;
  const std::string svg = render_report_svg(report);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("dual/ORA") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(render_report_svg({}).find("no data") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Run execution.
// ---------------------------------------------------------------------------

TEST_CASE("execute_runs produces one consistent row per seed and horizon") {
  const fs::path out = scratch_dir() / "out";
  ExperimentConfig cfg = small_config(out);
  cfg.horizons = {60, 120};
  cfg.dump_traces = true;
  const std::vector<SummaryRow> rows = execute_runs(cfg, /*strict=*/false);
  REQUIRE(rows.size() == 6);  // 3 seeds x 2 horizons, sorted by (T, seed)
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SummaryRow& row = rows[i];
    CHECK(row.horizon == (i < 3 ? 60 : 120));
    CHECK(row.seed == 1 + i % 3);
    CHECK(row.algorithm == "dual");
    CHECK(row.dynamic_regret ==
          doctest::Approx(row.opt_dynamic - row.total_reward).epsilon(1e-12));
    CHECK(row.static_regret ==
          doctest::Approx(row.opt_static - row.total_reward).epsilon(1e-12));
    CHECK(row.rho_min_used == doctest::Approx(0.3));
    CHECK_FALSE(row.meta_applied);
    CHECK(row.theoretical_bound > 0.0);
    CHECK(row.tau >= 1);
    CHECK(row.tau <= row.horizon);
  }
  // Artifacts: summary.csv, run_meta.csv and one trace per run.
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(fs::exists(out / "run_meta.csv"));
  std::ifstream trace(out / "trace_T60_seed2.csv");
  REQUIRE(trace.good());
  std::string header;
  std::getline(trace, header);
  CHECK(header ==
        "t,arm,forced_void,reward,cost_0,remaining_0,lambda_0,cum_reward");
  std::ifstream meta_in(out / "run_meta.csv");
  std::getline(meta_in, header);
  CHECK(header.rfind("T,seed,algorithm", 0) == 0);
}

TEST_CASE("summary bytes are identical across reruns and thread counts") {
  const fs::path base = scratch_dir();
  ExperimentConfig cfg = small_config(base / "a");
  execute_runs(cfg, false);
  cfg.out_dir = (base / "b").string();
  execute_runs(cfg, false);
  CHECK(slurp(base / "a" / "summary.csv") == slurp(base / "b" / "summary.csv"));

  // A forced worker pool must not change a byte (slot-indexed results).
  setenv("PLANPACE_THREADS", "3", 1);
  cfg.out_dir = (base / "c").string();
  execute_runs(cfg, false);
  unsetenv("PLANPACE_THREADS");
  CHECK(slurp(base / "a" / "summary.csv") == slurp(base / "c" / "summary.csv"));
  CHECK(slurp(base / "a" / "run_meta.csv") == slurp(base / "c" / "run_meta.csv"));
}

// ---------------------------------------------------------------------------
// CLI.
// ---------------------------------------------------------------------------

TEST_CASE("cli run/report succeed end to end") {
  const fs::path dir = scratch_dir();
  const fs::path cfg_path =
      write_file(dir, "exp.cfg",
                 kValidConfig + "\n[runs]\nseeds = [1, 2]\n[output]\ndir = \"" +
                     (dir / "out").string() + "\"\n");
  CHECK(run_cli({"run", "--config", cfg_path.string()}) == 0);
  CHECK(fs::exists(dir / "out" / "summary.csv"));

  CHECK(run_cli({"report", "--in", (dir / "out").string(), "--svg"}) == 0);
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(fs::exists(dir / "out" / "report.svg"));

  // --seed overrides the configured list with a single seed.
  CHECK(run_cli({"run", "--config", cfg_path.string(), "--seed", "9", "--out",
                 (dir / "seeded").string()}) == 0);
  std::ifstream in(dir / "seeded" / "summary.csv");
  std::string header, line;
  std::getline(in, header);
  REQUIRE(std::getline(in, line));
  CHECK(line.find(",9,") != std::string::npos);
  CHECK_FALSE(std::getline(in, line));  // exactly one row
}

TEST_CASE("cli exit codes distinguish config errors from run failures") {
  const fs::path dir = scratch_dir();
  const fs::path bad =
      write_file(dir, "bad.cfg", replace_once(kValidConfig, "K = 3", "K = 1"));
  CHECK(run_cli({"run", "--config", bad.string()}) == 2);
  CHECK(run_cli({"oracle", "--config", (dir / "missing.cfg").string()}) == 2);
  CHECK(run_cli({"bogus_subcommand"}) == 2);

  // Report over an existing-but-empty directory is a run failure, not a
  // config error.
  const fs::path empty = dir / "empty";
  fs::create_directories(empty);
  CHECK(run_cli({"report", "--in", empty.string()}) == 1);

  // Strict report fails (exit 1) when malformed rows had to be skipped.
  const fs::path mixed = dir / "mixed";
  fs::create_directories(mixed);
  write_file(mixed, "summary.csv",
             std::string(kSummaryHeader) +
                 "\ndual,ORA,100,1,50,50,49,0,1,100,800,0.25,0\nnot,a,row\n");
  CHECK(run_cli({"report", "--in", mixed.string()}) == 0);
  CHECK(run_cli({"report", "--in", mixed.string(), "--strict"}) == 1);
}

TEST_CASE("cli oracle prints the four baseline values") {
  const fs::path dir = scratch_dir();
  const fs::path cfg_path = write_file(
      dir, "oracle.cfg", kValidConfig + "\n[errors]\neps = 0\n");
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  const int code = run_cli({"oracle", "--config", cfg_path.string()});
  std::cout.rdbuf(old);
  REQUIRE(code == 0);
  const std::string text = captured.str();
  CHECK(text.find("T=40") != std::string::npos);
  REQUIRE(text.find("opt_dynamic=") != std::string::npos);
  REQUIRE(text.find("opt_dynamic_eps=") != std::string::npos);

  // eps = 0 must reproduce the unrelaxed values exactly.
  auto value_after = [&](const std::string& tag) {
    const std::size_t at = text.find(tag);
    REQUIRE(at != std::string::npos);
    return std::strtod(text.c_str() + at + tag.size(), nullptr);
  };
  CHECK(value_after("opt_dynamic=") ==
        doctest::Approx(value_after("opt_dynamic_eps=")).epsilon(1e-9));
  CHECK(value_after("opt_static=") ==
        doctest::Approx(value_after("opt_static_eps=")).epsilon(1e-9));
  // Sanity: the one-resource stationary fixture has a nonzero optimum.
  CHECK(value_after("opt_dynamic=") > 0.0);
}
