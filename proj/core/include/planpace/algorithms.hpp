// The learners.
//
// ORA ("online resource allocation"): the round's reward and cost functions
// are observed *before* deciding, so the Lagrangian best response is computed
// directly and only the dual prices are learned.  OLRC ("online learning with
// resource constraints"): feedback arrives *after* deciding — full (the whole
// functions) or bandit (the played arm's values only) — so a primal regret
// minimizer picks the strategy mixture and a full-feedback dual learns the
// prices.  A meta-procedure handles plans whose minimum entry rho_min is
// arbitrarily small by capping the dual radius at 1/(rho/T^{1/4}) and
// rescaling the plan by (1 - T^{-1/4}); a void-skip preprocessing variant
// instead masks the few sub-threshold rounds when there are at most sqrt(T)
// of them.
//
// All runners implement their pseudocode order verbatim, including the
// details that matter for analysis fidelity: the strategy mixture is selected
// unconditionally and only the *played* action is gated on remaining budgets;
// OLRC fetches the dual iterate after playing; updates continue on
// forced-void rounds.

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "planpace/core.hpp"
#include "planpace/environments.hpp"
#include "planpace/minimizers.hpp"

namespace planpace {

enum class PrimalKind { None, Hedge, Exp3Ix };
enum class TieBreak { LowestIndex };

struct AlgorithmSpec {
  Setting setting = Setting::Ora;
  bool meta_rescale = false;
  bool void_skip = false;
  DualKind dual_kind = DualKind::Euclidean;
  PrimalKind primal_kind = PrimalKind::None;  // OLRC only
  TieBreak tie_break = TieBreak::LowestIndex;
  double delta = 0.05;    // confidence used when reporting bounds
  double delta_P = 0.05;  // bandit-primal confidence (bound reporting only)

  // Enforces: hedge only with OLRC_full, exp3ix only with OLRC_bandit, no
  // primal for ORA, and meta_rescale/void_skip mutual exclusivity.
  void validate() const;
};

// The two decompositions of the per-round Lagrangian
// L(xi, lambda) = E_xi[f] + sum_i lambda[i] (plan_i - E_xi[c_i]).
struct LagrangianTerms {
  double reward_part = 0.0;   // E_xi[f]
  double penalty_part = 0.0;  // sum_i lambda[i] E_xi[c_i]
  double value = 0.0;
};

// Best-response form: value = reward_part - penalty_part (the plan term is
// constant in xi and dropped from the argmax).
LagrangianTerms best_response_terms(const std::vector<double>& f,
                                    const std::vector<std::vector<double>>& c,
                                    const Mixture& xi,
                                    const LagrangeVector& lambda);

// Analysis form: value = reward_part + sum_i lambda[i] (plan_i - spend_i).
LagrangianTerms analysis_terms(const std::vector<double>& f,
                               const std::vector<std::vector<double>>& c,
                               const std::vector<double>& plan_column,
                               const Mixture& xi,
                               const LagrangeVector& lambda);

// Point mass on argmax_x [ f(x) - sum_i lambda[i] c(x)[i] ] — the Lagrangian
// best response, always attained at a pure strategy.  Ties break toward the
// lowest arm index.
Mixture ora_best_response(const std::vector<double>& f,
                          const std::vector<std::vector<double>>& c,
                          const LagrangeVector& lambda);

// Optional per-round mask: true entries force the void action and suppress
// all minimizer updates for that round (void-skip preprocessing).  The mask
// indexes rounds 1..T as mask[t-1].
using SkipMask = std::vector<bool>;

// Dual algorithm for ORA.  Per round: observe (f_t, c_t); best-respond to
// lambda_t; play the sampled arm iff every remaining budget is >= 1, else the
// void arm; update budgets; feed the dual the gradient of
// r_t^D(lambda) = -sum_i lambda[i](B_t^(i) - E_{xi_t}[c_t[i]]); fetch
// lambda_{t+1}.  The first lambda is fetched before the loop.
RunTrace run_ora(const Instance& inst, const Environment& env,
                 DualMinimizer& dual, const CounterRng& rng,
                 const SkipMask* mask = nullptr);

// Primal-dual algorithm for OLRC with full feedback.  Per round: the primal
// selects xi_t; gated play; observe (f_t, c_t); update budgets; fetch
// lambda_t; feed the primal the payoff vector f_t(x) - sum_i lambda_t[i]
// c_t(x)[i] over all arms; feed the dual the gradient built from the
// *expected* spend under xi_t.
RunTrace run_olrc_full(const Instance& inst, const Environment& env,
                       HedgePrimal& primal, DualMinimizer& dual,
                       const CounterRng& rng, const SkipMask* mask = nullptr);

// Bandit-feedback variant: only f_t(x_t) and c_t(x_t) are ever read (through
// a facade that throws on any wider access); the primal receives the scalar
// f_t(x_t) - sum_i lambda_t[i] c_t(x_t)[i] at the played arm and the dual's
// gradient uses the realized cost.
RunTrace run_olrc_bandit(const Instance& inst, const Environment& env,
                         Exp3IxPrimal& primal, DualMinimizer& dual,
                         const CounterRng& rng,
                         const SkipMask* mask = nullptr);

// Meta-procedure inputs: rho_hat = rho / T^{1/4} (the capped Slater
// surrogate) and a copy of the instance whose plan is rescaled entrywise by
// (1 - T^{-1/4}).  The returned instance keeps the ORIGINAL budget — stopping
// and feasibility are still governed by B — so its plan rows intentionally
// sum to B(1 - T^{-1/4}), not B.
std::pair<double, Instance> meta_transform(const Instance& inst);

struct VoidSkipResult {
  SkipMask mask;              // true -> round is masked (play void, no updates)
  std::size_t masked_count = 0;
  double reduced_rho_min = 0.0;  // min plan entry over unmasked rounds
  Instance reduced;           // plan restricted to unmasked rounds
};

// Masks every round with some plan entry below the threshold (default
// rho / T^{1/4}).  Applicable only when at most sqrt(T) rounds qualify;
// otherwise throws RefusePreprocess and the caller should use the
// meta-procedure instead.
VoidSkipResult void_skip_preprocess(const Instance& inst,
                                    double threshold = -1.0);

// A finished run plus the bookkeeping the harness reports.
struct RunResult {
  RunTrace trace;
  double rho_min_used = 0.0;  // the Slater value defining the dual radius
  bool meta_applied = false;
  std::size_t void_skipped_rounds = 0;
  std::size_t clamp_events = 0;  // payoffs clamped by any minimizer
};

// Validates, applies meta rescaling or void-skip preprocessing per the
// AlgorithmSpec flags, builds the configured minimizers with the ranges
// [-1/rho_min, 1/rho_min] (dual) and [-1/rho_min, 1 + 1/rho_min] (primal),
// and runs the setting's algorithm.  Throws ZeroRhoMin when the plan's
// minimum entry is zero and neither escape hatch is enabled.
RunResult run_algorithm(const AlgorithmSpec& spec, const Instance& inst,
                        const Environment& env, std::uint64_t run_seed);

}  // namespace planpace
