// Core domain types for online decision making under knapsack constraints
// guided by a spending plan: problem instances, per-round budget plans, primal
// (mixture) and dual (Lagrange multiplier) decisions, and per-run traces.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace planpace {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode {
  PlanRowSumMismatch,
  EntryOutOfRange,
  DegenerateDimensions,
  ScaledCostOutOfRange,
  CycleDetected,
  NumericalBreakdown,
  ProbabilityUnderflow,
  InvalidParameters,
  ZeroRhoMin,
  RefusePreprocess,
  InfeasiblePlanSpec,
  BanditHygieneViolation,
  DimensionMismatch,
  EmptyInput,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the whole library; `code()` carries the machine-
// readable category, the message names the offending index/value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Per-round, per-resource budget targets B_t^(i).  Entries live in [0, 1] and
// each resource row sums to the aggregate budget B.  The plan guides spending;
// it is not a hard constraint (the aggregate budget is).
struct SpendingPlan {
  std::size_t num_resources = 0;  // m
  std::size_t horizon = 0;        // T
  std::vector<double> entries;    // row-major m x T

  SpendingPlan() = default;
  SpendingPlan(std::size_t m, std::size_t T, double fill = 0.0)
      : num_resources(m), horizon(T), entries(m * T, fill) {}

  double entry(std::size_t i, std::size_t t) const {
    return entries[i * horizon + t];
  }
  double& entry(std::size_t i, std::size_t t) {
    return entries[i * horizon + t];
  }

  double row_sum(std::size_t i) const;

  // Minimum entry over all resources and rounds: the margin by which the void
  // action satisfies every per-round constraint (the Slater parameter of the
  // baseline programs).  Zero is legal but degrades the dual's decision space.
  double rho_min() const;
};

// A full problem instance.  Arm 0 is always the void arm: zero reward and
// zero cost in every round, guaranteeing a feasible policy exists.
struct Instance {
  std::size_t horizon = 0;        // T >= 1
  std::size_t num_arms = 0;       // K >= 2 (void arm + at least one real arm)
  std::size_t num_resources = 0;  // m >= 1
  double budget = 0.0;            // B, common to all resources
  SpendingPlan plan;

  // Average per-round budget.
  double rho() const { return budget / static_cast<double>(horizon); }
};

// The three interaction protocols.  ORA observes the round's reward and cost
// functions before deciding (dynamic-regret benchmark); OLRC observes them —
// fully or only at the played arm — after deciding (static-regret benchmark).
enum class Setting { Ora, OlrcFull, OlrcBandit };

const char* setting_name(Setting setting);

// Probability vector over the K arms (a strategy mixture).
struct Mixture {
  std::vector<double> probs;

  static Mixture void_dirac(std::size_t num_arms);
  static Mixture uniform(std::size_t num_arms);
};

// Dual decision: nonnegative prices on the m resources, constrained to the
// truncated l1 ball { lambda >= 0 : ||lambda||_1 <= radius }.
struct LagrangeVector {
  std::vector<double> values;
  double radius = 0.0;  // the l1 bound (1/rho_min, or 1/rho_hat under meta)

  double l1_norm() const;
  bool feasible(double slack = 1e-9) const;
};

// Record of one interaction round.
struct RoundOutcome {
  std::size_t t = 0;  // 1-based round index
  Mixture mixture;    // the selected strategy mixture (pre-gating)
  std::size_t arm = 0;
  double reward = 0.0;
  std::vector<double> costs;              // realized cost of the played arm
  std::vector<double> remaining_budgets;  // after this round's spend
  LagrangeVector lambda;                  // the dual iterate used this round
  bool forced_void = false;  // true iff some remaining budget < 1 at round start
  bool skipped = false;      // true iff a preprocessing mask forced the void arm
};

// Full trace of a run.  `stop_time` is the first round after which some
// remaining budget fell below 1 (T if none); later rounds are forced void.
struct RunTrace {
  std::vector<RoundOutcome> outcomes;
  std::size_t stop_time = 0;  // tau
  double total_reward = 0.0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Checks all Instance/SpendingPlan invariants: T >= 1, K >= 2, m >= 1, plan
// dimensions match, entries in [0, 1], and each plan row sums to B within
// 1e-9.  Returns its argument on success; throws Error otherwise
// (DegenerateDimensions, EntryOutOfRange, PlanRowSumMismatch).
const Instance& validate_instance(const Instance& inst);

// Reduction of heterogeneous budgets (B_1, ..., B_m) to the common budget
// min_j B_j: resource i's costs are divided by B_i / min_j B_j.  Returns the
// per-resource divisors.
std::vector<double> budget_scale_factors(const std::vector<double>& budgets);

// Applies one scale factor to one raw cost.  Scaled costs must stay in [0, 1];
// a violation is an error (ScaledCostOutOfRange), never a silent clip.
double normalize_cost(double raw_cost, double scale_factor);

// Rescales a K x m cost matrix (row-major, arm-major) in place.
void normalize_costs(std::vector<double>& costs_by_arm, std::size_t num_arms,
                     const std::vector<double>& scale_factors);

// remaining - costs, componentwise.  No flooring: the stopping rule keeps
// remaining budgets from going negative (costs are <= 1 and play is gated on
// every remaining budget being >= 1).
std::vector<double> update_budget(const std::vector<double>& remaining,
                                  const std::vector<double>& costs);

// True iff some remaining budget is < 1, i.e. sampling a real arm might
// overdraw.  The comparison is non-strict at the boundary: remaining == 1
// still permits play.
bool should_force_void(const std::vector<double>& remaining);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

// Shortest round-trip decimal representation ('.' decimal point, full double
// precision).  Used for every CSV value so identical runs produce
// byte-identical files.
std::string format_double(double value);

// CSV columns:
//   t,arm,forced_void,reward,cost_0..cost_{m-1},
//   remaining_0..remaining_{m-1},lambda_0..lambda_{m-1},cum_reward
void write_trace_csv(std::ostream& out, const RunTrace& trace,
                     std::size_t num_resources);

}  // namespace planpace
