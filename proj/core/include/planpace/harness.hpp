// Experiment harness: config parsing, seeded run execution with horizon
// sweeps, oracle computation, regret measurement, CSV emission and report
// aggregation.  The CLI front end in tools/ is a thin wrapper around
// cli_main.
//
// Config format: flat structured text with [section] headers and key = value
// pairs; values follow the JSON data model (numbers, booleans, quoted
// strings, arrays), with bare words accepted as strings.  Custom plan
// matrices are supplied as a CSV path.  See configs/ for examples.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "planpace/algorithms.hpp"
#include "planpace/core.hpp"
#include "planpace/environments.hpp"
#include "planpace/oracles.hpp"

namespace planpace {

// Environment description before a horizon is fixed: piecewise boundaries
// may be given as absolute rounds or as fractions of T (required for
// horizon sweeps).
struct EnvTemplate {
  EnvKind kind = EnvKind::Stationary;
  NoiseModel noise = NoiseModel::Bernoulli;
  double uniform_halfwidth = 0.1;
  bool shared_noise = false;
  std::uint64_t seed = 0;
  std::vector<MeanPhase> phases;
  std::vector<std::size_t> boundaries_abs;
  std::vector<double> boundaries_frac;
};

enum class MetaMode { Auto, On, Off };

struct ExperimentConfig {
  // [instance]; exactly one of budget / rho is set (the other is negative).
  std::size_t horizon = 0;
  std::size_t num_arms = 0;
  std::size_t num_resources = 0;
  double budget = -1.0;
  double rho = -1.0;

  PlanSpec plan;
  EnvTemplate environment;
  AlgorithmSpec algorithm;
  MetaMode meta_mode = MetaMode::Auto;

  bool has_eps = false;
  double eps_uniform = 0.0;  // [errors] eps, applied per round and resource

  // [runs]
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> horizons;  // sweep; defaults to {horizon}

  // [output]
  std::string out_dir = "out";
  bool dump_traces = false;
};

// Parses and validates a config file.  All failures throw Error with code
// ConfigError and a message naming the file, line and key.
ExperimentConfig load_config(const std::string& path);

// Materializations for one horizon of a sweep.
double budget_for(const ExperimentConfig& config, std::size_t horizon);
EnvironmentSpec instantiate_environment(const ExperimentConfig& config,
                                        std::size_t horizon);
Instance instantiate_instance(const ExperimentConfig& config,
                              std::size_t horizon);

// Resolves the auto-meta rule for one instance: meta is applied exactly when
// the mode is On, or the mode is Auto and rho_min <= rho / T^{1/4}.
bool resolve_meta(const ExperimentConfig& config, const Instance& inst);

// One line of summary.csv.
struct SummaryRow {
  std::string algorithm;
  Setting setting = Setting::Ora;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  double total_reward = 0.0;
  double opt_dynamic = 0.0;
  double opt_static = 0.0;
  double dynamic_regret = 0.0;
  double static_regret = 0.0;
  std::size_t tau = 0;
  double theoretical_bound = 0.0;
  double rho_min_used = 0.0;
  bool meta_applied = false;
};

extern const char* const kSummaryHeader;

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in,
                                         std::size_t* malformed_rows);

// Executes the configured runs (seeds x horizons) on a worker pool capped by
// the PLANPACE_THREADS environment variable, writes summary.csv,
// run_meta.csv and optional per-run traces into out_dir, and returns the
// rows in deterministic (T, seed) order.
std::vector<SummaryRow> execute_runs(const ExperimentConfig& config,
                                     bool strict);

// Aggregate of one (algorithm, setting, T) group of summary rows.
struct ReportRow {
  std::string algorithm;
  Setting setting = Setting::Ora;
  std::size_t horizon = 0;
  std::size_t count = 0;
  double median_regret = 0.0;  // dynamic for ORA, static for OLRC
  double iqr_regret = 0.0;
  double median_bound = 0.0;
  double bound_over_regret = 0.0;  // median bound / max(median regret, 1)
  double sublinearity_ratio = 0.0;  // median regret at T over the T/4 group; 0 if absent
};

std::vector<ReportRow> aggregate_rows(const std::vector<SummaryRow>& rows);
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);

// Minimal hand-rolled log-log line chart of median regret vs T, one series
// per (algorithm, setting).  Best-effort: failures never gate exit codes.
std::string render_report_svg(const std::vector<ReportRow>& rows);

// CLI entry point: run | oracle | report (see --help).  Exit codes: 0 ok,
// 1 run failure, 2 config error.
int cli_main(int argc, char** argv);

}  // namespace planpace
