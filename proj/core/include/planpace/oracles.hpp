// Baselines and theoretical regret bounds.
//
// OPT_D ("dynamic"): the best sequence of per-round strategy mixtures whose
// expected spend respects the spending plan at every round.  It decomposes
// into T independent small linear programs.  OPT_H ("static"): the best
// single mixture played every round under the same per-round constraints —
// one LP with m*T inequality rows.  Both have epsilon-relaxed variants in
// which per-round caps loosen to B_t + eps_t while m aggregate rows keep the
// total expected spend within B.
//
// regret_bound evaluates the closed-form high-probability guarantees for the
// plain and meta-rescaled algorithms in all three settings; it is consumed
// only by reports and acceptance checks, never by the algorithms themselves.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "planpace/core.hpp"
#include "planpace/environments.hpp"
#include "planpace/lp.hpp"

namespace planpace {

// Exact per-round means of an instance: fbar[t][x] and cbar[t][x][i], with
// the void arm's row identically zero.
struct MeanProfile {
  std::vector<std::vector<double>> fbar;               // T x K
  std::vector<std::vector<std::vector<double>>> cbar;  // T x K x m

  std::size_t horizon() const { return fbar.size(); }
  std::size_t num_arms() const { return fbar.empty() ? 0 : fbar[0].size(); }
  std::size_t num_resources() const {
    return cbar.empty() || cbar[0].empty() ? 0 : cbar[0][0].size();
  }

  void validate() const;
};

// Builds the analytic mean profile of an environment over its horizon.
MeanProfile profile_from_environment(const Environment& env);

// Nonnegative per-round, per-resource plan violations eps_t^(i).
struct ErrorSchedule {
  std::vector<std::vector<double>> eps;  // m x T

  static ErrorSchedule uniform(std::size_t num_resources, std::size_t horizon,
                               double value);
  double total() const;
  void validate() const;
};

struct OracleReport {
  double opt_dynamic = 0.0;
  double opt_static = 0.0;
  bool has_eps = false;
  double opt_dynamic_eps = 0.0;
  double opt_static_eps = 0.0;
  std::vector<double> per_round_dynamic_values;  // length T
};

// ---------------------------------------------------------------------------
// Baseline oracles.
// ---------------------------------------------------------------------------

// Eq.-1 analogue: sum over rounds of
//   max_xi  sum_x xi(x) fbar_t(x)
//   s.t.    sum_x xi(x) cbar_t(x)[i] <= B_t^(i)  for all i,   xi in simplex.
// Always feasible (the void arm satisfies every row when the plan is
// nonnegative).  Returns (total, per-round optima).
std::pair<double, std::vector<double>> opt_dynamic(const MeanProfile& profile,
                                                   const SpendingPlan& plan);

// Same feasible rows for every round, one shared mixture.  For large m*T the
// LP is solved through its dual (K-1 constraint rows) — identical value by
// strong duality, exercised against the primal path in tests.
double opt_static(const MeanProfile& profile, const SpendingPlan& plan);

// Per-round caps relaxed to B_t^(i) + eps_t^(i); m aggregate rows
// sum_t sum_x xi_t(x) cbar_t(x)[i] <= B keep the relaxation from overspending
// in total.  One LP over T*(K-1) variables; intended for moderate horizons.
double opt_dynamic_eps(const MeanProfile& profile, const SpendingPlan& plan,
                       const ErrorSchedule& errs, double budget);

// Fixed-mixture analogue of the above.
double opt_static_eps(const MeanProfile& profile, const SpendingPlan& plan,
                      const ErrorSchedule& errs, double budget);

// Recomputes both realized regrets from a finished trace:
//   (opt_dynamic - total_reward, opt_static - total_reward).
// Negative values (lucky sample paths) are preserved, not clipped.
std::pair<double, double> realized_regrets(const RunTrace& trace,
                                           const OracleReport& report);

// ---------------------------------------------------------------------------
// Closed-form regret bounds.
// ---------------------------------------------------------------------------

// High-probability regret bound for the given setting.  R_D_T and R_P_T are
// the *unit-range* regret bounds of the dual and primal subroutines at
// horizon T; the closed forms scale them by the payoff-range factors (2/rho_min
// for the dual, 1 + 2/rho_min for the primal; under meta rescaling rho_min is
// replaced by rho / T^{1/4}).  With meta = false rho_min must be positive;
// with meta = true only rho must be.  eps_total, when nonzero, adds the
// plan-violation term (1/rho_min resp. T^{1/4}/rho times the summed eps).
double regret_bound(Setting setting, bool meta, std::size_t horizon,
                    double rho, double rho_min, double R_D_T, double R_P_T,
                    double delta, double delta_P, double eps_total = 0.0);

// Unit-range regret bounds for the concrete subroutines, used to fill the
// R_D_T / R_P_T slots above.
double hedge_unit_regret(std::size_t num_actions, std::size_t horizon);
double entropic_dual_unit_regret(std::size_t num_resources,
                                 std::size_t horizon);
// Euclidean OGD over the ball of radius D with the default step size: raw
// regret <= 1.5 * D * G * sqrt(T) with G = sqrt(m) * max(1, 2D); divided by
// the payoff width 2D to express it on the unit range.
double ogd_unit_regret(std::size_t num_resources, double radius,
                       std::size_t horizon);
// High-probability EXP3-IX bound at confidence 1 - delta_P.
double exp3ix_unit_regret(std::size_t num_arms, std::size_t horizon,
                          double delta_P);

}  // namespace planpace
