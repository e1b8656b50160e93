// Acceptance gate for the planpace library.  Each criterion below runs a
// self-contained experiment and prints exactly one [PASS]/[FAIL] line; the
// process exits nonzero if any criterion fails.  Stated runtime limits are
// enforced as part of the pass condition.
//
//   1. feasibility: randomized runs never overdraw any budget prefix
//   2. oracle correctness: simplex vs grid brute force; baseline dominance
//   3. subroutine no-regret: Hedge and OGD against grid comparators
//   4. ORA dynamic-regret bound conformance and sublinear growth
//   5. OLRC full-feedback static-regret bound conformance
//   6. bandit-feedback conformance and EXP3-IX concentration
//   7. meta-procedure on spiky plans with vanishing rho_min
//   8. epsilon-relaxed baseline robustness
//   9. byte determinism of the summary CSVs

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "planpace/algorithms.hpp"
#include "planpace/core.hpp"
#include "planpace/environments.hpp"
#include "planpace/harness.hpp"
#include "planpace/lp.hpp"
#include "planpace/minimizers.hpp"
#include "planpace/oracles.hpp"

using namespace planpace;
namespace fs = std::filesystem;

namespace {

struct CheckFailure {
  std::string message;
};

#define ACC_REQUIRE(cond, detail)                                      \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::ostringstream acc_out_;                                     \
      acc_out_ << __FILE__ << ":" << __LINE__ << ": " << detail;       \
      throw CheckFailure{acc_out_.str()};                              \
    }                                                                  \
  } while (0)

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EnvironmentSpec stationary_spec(std::vector<double> rewards,
                                std::vector<std::vector<double>> costs,
                                std::size_t horizon, EnvKind kind,
                                NoiseModel noise, std::uint64_t seed,
                                double halfwidth = 0.1) {
  EnvironmentSpec spec;
  spec.kind = kind;
  spec.num_arms = rewards.size();
  spec.num_resources = costs[0].size();
  spec.horizon = horizon;
  MeanPhase phase;
  phase.reward_means = std::move(rewards);
  phase.cost_means = std::move(costs);
  spec.phases = {phase};
  spec.noise = noise;
  spec.uniform_halfwidth = halfwidth;
  spec.seed = seed;
  return spec;
}

Instance uniform_instance(std::size_t T, std::size_t K, std::size_t m,
                          double rho) {
  Instance inst;
  inst.horizon = T;
  inst.num_arms = K;
  inst.num_resources = m;
  inst.budget = rho * static_cast<double>(T);
  inst.plan = SpendingPlan(m, T, rho);
  return inst;
}

// Replays the runner's sequential budget arithmetic and returns the number
// of violations: any prefix with negative remaining budget, any remaining
// value that does not bitwise match the trace, or any gating inconsistency.
std::size_t feasibility_violations(const RunTrace& trace,
                                   const Instance& inst) {
  std::size_t violations = 0;
  std::vector<double> rem(inst.num_resources, inst.budget);
  for (const RoundOutcome& o : trace.outcomes) {
    const bool gate = should_force_void(rem);
    if (o.forced_void != (gate && !o.skipped)) ++violations;
    for (std::size_t i = 0; i < inst.num_resources; ++i) {
      rem[i] -= o.costs[i];
      if (rem[i] != o.remaining_budgets[i]) ++violations;
      if (rem[i] < 0.0) ++violations;
    }
  }
  return violations;
}

AlgorithmSpec spec_for(Setting setting) {
  AlgorithmSpec spec;
  spec.setting = setting;
  switch (setting) {
    case Setting::Ora: spec.primal_kind = PrimalKind::None; break;
    case Setting::OlrcFull: spec.primal_kind = PrimalKind::Hedge; break;
    case Setting::OlrcBandit: spec.primal_kind = PrimalKind::Exp3Ix; break;
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Criterion 1: feasibility.  >= 200 randomized runs across all settings and
// both meta variants; cumulative spend <= B on every prefix, exactly.
// ---------------------------------------------------------------------------

void criterion_feasibility() {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::size_t meta_runs = 0;
  std::size_t plain_runs = 0;
  bool setting_seen[3] = {false, false, false};

  for (int rep = 0; rep < 204; ++rep) {
    const std::size_t T = 80 + static_cast<std::size_t>(220 * unit(gen));
    const std::size_t K = 2 + rep % 3;
    const std::size_t m = 1 + rep % 2;
    std::vector<double> rewards(K, 0.0);
    std::vector<std::vector<double>> costs(K, std::vector<double>(m, 0.0));
    for (std::size_t x = 1; x < K; ++x) {
      rewards[x] = unit(gen);
      for (std::size_t i = 0; i < m; ++i) costs[x][i] = unit(gen);
    }
    EnvKind kind = rep % 4 == 3 ? EnvKind::DeterministicAdversarial
                                : EnvKind::Stationary;
    NoiseModel noise = rep % 5 == 4 ? NoiseModel::UniformInterval
                                    : NoiseModel::Bernoulli;
    EnvironmentSpec env_spec = stationary_spec(rewards, costs, T, kind, noise,
                                               2000 + rep, 0.05);
    if (rep % 8 == 7) {
      // Two-phase piecewise variant.
      MeanPhase second = env_spec.phases[0];
      for (std::size_t x = 1; x < K; ++x) second.reward_means[x] = unit(gen);
      env_spec.kind = EnvKind::Piecewise;
      env_spec.phases.push_back(second);
      env_spec.phase_boundaries = {T / 2, T};
    }
    const Environment env(env_spec);

    // A handful of sub-unit budgets exercise the from-the-start gate.
    const double rho = rep % 25 == 24 ? 0.5 / static_cast<double>(T)
                                      : 0.05 + 0.55 * unit(gen);
    const Instance inst = uniform_instance(T, K, m, rho);

    AlgorithmSpec spec = spec_for(static_cast<Setting>(rep % 3));
    spec.meta_rescale = rep % 2 == 1;
    if (spec.meta_rescale) ++meta_runs; else ++plain_runs;
    setting_seen[rep % 3] = true;

    const RunResult result = run_algorithm(spec, inst, env, 500 + rep);
    violations += feasibility_violations(result.trace, inst);
    ++runs;
  }

  // Void-skip variant over plans containing zero-budget rounds.
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t T = 144;
    PlanSpec pspec;
    pspec.kind = PlanKind::CustomMatrix;
    const double rich = 40.0 / 132.0;
    std::vector<double> row(T, rich);
    for (std::size_t z = 0; z < 12; ++z) row[z * 12] = 0.0;
    pspec.matrix = {row};
    Instance inst;
    inst.horizon = T;
    inst.num_arms = 3;
    inst.num_resources = 1;
    inst.budget = 40.0;
    inst.plan = generate_plan(pspec, T, 1, 40.0);
    const Environment env(stationary_spec(
        {0.0, 0.7, 0.4}, {{0.0}, {0.6}, {0.2}}, T, EnvKind::Stationary,
        NoiseModel::Bernoulli, 3000 + rep));
    AlgorithmSpec spec = spec_for(static_cast<Setting>(rep % 3));
    spec.void_skip = true;
    const RunResult result = run_algorithm(spec, inst, env, 700 + rep);
    violations += feasibility_violations(result.trace, inst);
    ++runs;
  }

  ACC_REQUIRE(runs >= 200, "only " << runs << " runs executed");
  ACC_REQUIRE(setting_seen[0] && setting_seen[1] && setting_seen[2],
              "not all settings covered");
  ACC_REQUIRE(meta_runs >= 50 && plain_runs >= 50,
              "meta variants unbalanced: " << meta_runs << " meta, "
                                           << plain_runs << " plain");
  ACC_REQUIRE(violations == 0,
              violations << " feasibility violations across " << runs
                         << " runs");
}

// ---------------------------------------------------------------------------
// Criterion 2: oracle correctness.  Simplex vs grid on 500 random LPs;
// baseline dominance on 200 random instances.
// ---------------------------------------------------------------------------

LinearProgram random_boxed_lp(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LinearProgram lp;
  lp.n = n;
  lp.c.resize(n);
  for (std::size_t j = 0; j < n; ++j) lp.c[j] = 2.0 * unit(gen) - 0.5;
  // Per-variable box rows keep the feasible region inside [0, 2]^n (the
  // grid's sweep range); the origin stays feasible because every rhs > 0.
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> row(n, 0.0);
    row[j] = 1.0;
    lp.add_inequality(row, 0.2 + 1.8 * unit(gen));
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = unit(gen) - 0.3;
    lp.add_inequality(row, 0.3 + 1.2 * unit(gen));
  }
  return lp;
}

MeanProfile random_profile(std::mt19937_64& gen, std::size_t T, std::size_t K,
                           std::size_t m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MeanProfile profile;
  profile.fbar.assign(T, std::vector<double>(K, 0.0));
  profile.cbar.assign(
      T, std::vector<std::vector<double>>(K, std::vector<double>(m, 0.0)));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t x = 1; x < K; ++x) {
      profile.fbar[t][x] = unit(gen);
      for (std::size_t i = 0; i < m; ++i) profile.cbar[t][x][i] = unit(gen);
    }
  }
  return profile;
}

void criterion_oracles() {
  std::mt19937_64 gen(202);
  const double h = 0.01;

  std::size_t lps = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = rep < 150 ? 1 : (rep < 400 ? 2 : 3);
    const LinearProgram lp = random_boxed_lp(gen, n);
    const LpSolution fast = solve_lp(lp);
    const LpSolution slow = lp_brute_check(lp, h);
    ACC_REQUIRE(fast.status == LpStatus::Optimal,
                "rep " << rep << ": simplex status not optimal");
    ACC_REQUIRE(slow.status == LpStatus::Optimal,
                "rep " << rep << ": grid status not optimal");
    double c_norm = 0.0;
    for (double cj : lp.c) c_norm += std::abs(cj);
    const double tol = 2.0 * h * c_norm + 1e-9;
    ACC_REQUIRE(std::abs(fast.objective_value - slow.objective_value) <= tol,
                "rep " << rep << ": simplex " << fast.objective_value
                       << " vs grid " << slow.objective_value
                       << " differ beyond " << tol);
    ++lps;
  }
  ACC_REQUIRE(lps == 500, "expected 500 LPs, ran " << lps);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t T = 2 + static_cast<std::size_t>(19 * unit(gen));
    const std::size_t K = 2 + static_cast<std::size_t>(4 * unit(gen));
    const std::size_t m = 1 + rep % 2;
    const double rho = 0.1 + 0.8 * unit(gen);
    const MeanProfile profile = random_profile(gen, T, K, m);
    const SpendingPlan plan(m, T, rho);
    const double budget = rho * static_cast<double>(T);
    const double eps = 0.08 * unit(gen);
    const ErrorSchedule errs = ErrorSchedule::uniform(m, T, eps);

    const double dyn = opt_dynamic(profile, plan).first;
    const double stat = opt_static(profile, plan);
    const double dyn_eps = opt_dynamic_eps(profile, plan, errs, budget);
    const double stat_eps = opt_static_eps(profile, plan, errs, budget);

    ACC_REQUIRE(dyn_eps >= dyn - 1e-6,
                "rep " << rep << ": opt_dynamic_eps " << dyn_eps
                       << " < opt_dynamic " << dyn);
    ACC_REQUIRE(dyn >= stat - 1e-6, "rep " << rep << ": opt_dynamic " << dyn
                                           << " < opt_static " << stat);
    ACC_REQUIRE(stat_eps >= stat - 1e-6,
                "rep " << rep << ": opt_static_eps " << stat_eps
                       << " < opt_static " << stat);
    ACC_REQUIRE(dyn >= -1e-9 && dyn_eps <= static_cast<double>(T) + 1e-6,
                "rep " << rep << ": value outside [0, T]");
  }
}

// ---------------------------------------------------------------------------
// Criterion 3: subroutine no-regret.
// ---------------------------------------------------------------------------

void criterion_subroutines() {
  // Hedge against three adversary styles, T = 10^4, K <= 8.
  const std::size_t T = 10000;
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t arm_counts[] = {2, 3, 5, 8};

  for (int seq = 0; seq < 50; ++seq) {
    const std::size_t K = arm_counts[seq % 4];
    const double eta = std::sqrt(8.0 * std::log(static_cast<double>(K)) /
                                 static_cast<double>(T));
    std::vector<double> weights(K, 1.0);
    std::vector<double> cum_loss(K, 0.0);
    double learner_loss = 0.0;
    std::size_t leader = 0;
    for (std::size_t t = 0; t < T; ++t) {
      const Mixture p = hedge_select(weights);
      std::vector<double> loss(K, 0.0);
      switch (seq % 3) {
        case 0:  // iid uniform losses
          for (std::size_t k = 0; k < K; ++k) loss[k] = unit(gen);
          break;
        case 1: {  // adaptive: punish the learner's current favorite
          std::size_t fav = 0;
          for (std::size_t k = 1; k < K; ++k) {
            if (p.probs[k] > p.probs[fav]) fav = k;
          }
          loss.assign(K, 0.2);
          loss[fav] = 1.0;
          break;
        }
        default: {  // block leader: the good arm rotates every T/8 rounds
          if (t % (T / 8) == 0) leader = (leader + 1) % K;
          loss.assign(K, 1.0);
          loss[leader] = 0.0;
          break;
        }
      }
      for (std::size_t k = 0; k < K; ++k) {
        learner_loss += p.probs[k] * loss[k];
        cum_loss[k] += loss[k];
      }
      std::vector<double> payoff(K);
      for (std::size_t k = 0; k < K; ++k) payoff[k] = 1.0 - loss[k];
      weights = hedge_update(weights, payoff, eta);
    }
    const double best = *std::min_element(cum_loss.begin(), cum_loss.end());
    const double bound =
        std::sqrt(static_cast<double>(T) / 2.0 *
                  std::log(static_cast<double>(K))) + 1.0;
    ACC_REQUIRE(learner_loss - best <= bound,
                "hedge seq " << seq << ": regret " << (learner_loss - best)
                             << " exceeds " << bound);
  }

  // OGD over the truncated l1 ball against a grid comparator (step D/50).
  const double radii[] = {0.8, 1.5, 3.0};
  for (int seq = 0; seq < 20; ++seq) {
    const std::size_t m = 1 + seq % 2;
    const double D = radii[seq % 3];
    const std::size_t horizon = 2500;
    EuclideanDual dual(m, D, horizon);
    std::vector<double> grad_sum(m, 0.0);
    double learner_gain = 0.0;
    std::vector<double> block_sign(m, 1.0);
    for (std::size_t t = 0; t < horizon; ++t) {
      std::vector<double> g(m);
      if (seq % 2 == 0) {
        for (std::size_t i = 0; i < m; ++i) g[i] = 2.0 * unit(gen) - 1.0;
      } else {
        if (t % (horizon / 10) == 0) {
          for (std::size_t i = 0; i < m; ++i) {
            block_sign[i] = unit(gen) < 0.5 ? -1.0 : 1.0;
          }
        }
        for (std::size_t i = 0; i < m; ++i) {
          g[i] = block_sign[i] * (0.5 + 0.5 * unit(gen));
        }
      }
      const LagrangeVector lambda = dual.select();
      for (std::size_t i = 0; i < m; ++i) {
        learner_gain += lambda.values[i] * g[i];
        grad_sum[i] += g[i];
      }
      dual.receive(g);
    }
    // Grid sweep of {z >= 0 : ||z||_1 <= D}; the payoff is linear, so the
    // cumulative gain of a fixed comparator is <grad_sum, z>.
    const std::size_t steps = 50;
    double comparator = 0.0;
    if (m == 1) {
      for (std::size_t i = 0; i <= steps; ++i) {
        comparator = std::max(
            comparator, grad_sum[0] * (D * static_cast<double>(i) / steps));
      }
    } else {
      for (std::size_t i = 0; i <= steps; ++i) {
        for (std::size_t j = 0; i + j <= steps; ++j) {
          const double z0 = D * static_cast<double>(i) / steps;
          const double z1 = D * static_cast<double>(j) / steps;
          comparator =
              std::max(comparator, grad_sum[0] * z0 + grad_sum[1] * z1);
        }
      }
    }
    const double G = std::sqrt(static_cast<double>(m)) *
                     std::max(1.0, 2.0 * D);
    const double bound =
        1.5 * D * G * std::sqrt(static_cast<double>(horizon));
    ACC_REQUIRE(comparator - learner_gain <= bound,
                "ogd seq " << seq << ": regret " << (comparator - learner_gain)
                           << " exceeds " << bound);
  }
}

// ---------------------------------------------------------------------------
// Criteria 4/5 share one protocol: stationary stochastic arms, uniform plan,
// rho_min in {0.25, 0.5}, delta = 0.05, 20 seeds, T in {1000, 4000}.
// ---------------------------------------------------------------------------

struct ConformanceOutcome {
  // regrets[rho_index][T_index][seed - 1]
  std::vector<std::vector<std::vector<double>>> regrets;
};

ConformanceOutcome run_conformance(Setting setting, NoiseModel noise,
                                   double halfwidth, int min_conforming) {
  const double rhos[] = {0.25, 0.5};
  const std::size_t horizons[] = {1000, 4000};
  ConformanceOutcome outcome;
  outcome.regrets.assign(2, std::vector<std::vector<double>>(2));

  for (int r = 0; r < 2; ++r) {
    for (int h = 0; h < 2; ++h) {
      const double rho = rhos[r];
      const std::size_t T = horizons[h];
      const Environment env(stationary_spec(
          {0.0, 0.9, 0.3}, {{0.0}, {0.8}, {0.1}}, T, EnvKind::Stationary,
          noise, 4100 + 10 * r + h, halfwidth));
      const Instance inst = uniform_instance(T, 3, 1, rho);
      const MeanProfile profile = profile_from_environment(env);
      OracleReport oracle;
      oracle.opt_dynamic = opt_dynamic(profile, inst.plan).first;
      oracle.opt_static = opt_static(profile, inst.plan);

      const double R_D = ogd_unit_regret(1, 1.0 / rho, T);
      const double R_P = setting == Setting::OlrcFull
                             ? hedge_unit_regret(3, T)
                             : 0.0;
      const double bound = regret_bound(setting, /*meta=*/false, T, rho, rho,
                                        R_D, R_P, 0.05, 0.05);

      int conforming = 0;
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RunResult result =
            run_algorithm(spec_for(setting), inst, env, seed);
        const auto [dyn_regret, stat_regret] =
            realized_regrets(result.trace, oracle);
        const double regret =
            setting == Setting::Ora ? dyn_regret : stat_regret;
        if (regret <= bound) ++conforming;
        outcome.regrets[r][h].push_back(regret);
      }
      ACC_REQUIRE(conforming >= min_conforming,
                  "rho " << rho << " T " << T << ": only " << conforming
                         << "/20 seeds within the bound " << bound);
    }
  }
  return outcome;
}

void criterion_ora_conformance() {
  const ConformanceOutcome outcome = run_conformance(
      Setting::Ora, NoiseModel::UniformInterval, 0.002, 19);
  // Sublinearity: per-seed paired ratios R_{4T} / R_T, median <= 3.0.
  for (int r = 0; r < 2; ++r) {
    std::vector<double> ratios;
    for (std::size_t s = 0; s < 20; ++s) {
      const double base = outcome.regrets[r][0][s];
      const double grown = outcome.regrets[r][1][s];
      ratios.push_back(base > 0.0
                           ? grown / base
                           : std::numeric_limits<double>::infinity());
    }
    const double med = median(ratios);
    ACC_REQUIRE(med <= 3.0, "rho index " << r << ": median R_4T/R_T ratio "
                                         << med << " exceeds 3.0");
  }
}

void criterion_olrc_full_conformance() {
  run_conformance(Setting::OlrcFull, NoiseModel::Bernoulli, 0.0, 19);
}

// ---------------------------------------------------------------------------
// Criterion 6: bandit conformance and EXP3-IX concentration.
// ---------------------------------------------------------------------------

void criterion_bandit() {
  const std::size_t T = 5000;
  const Environment env(stationary_spec(
      {0.0, 0.9, 0.1, 0.1}, {{0.0}, {0.2}, {0.2}, {0.2}}, T,
      EnvKind::DeterministicAdversarial, NoiseModel::Bernoulli, 606));
  const Instance inst = uniform_instance(T, 4, 1, 0.5);
  const MeanProfile profile = profile_from_environment(env);
  OracleReport oracle;
  oracle.opt_dynamic = opt_dynamic(profile, inst.plan).first;
  oracle.opt_static = opt_static(profile, inst.plan);

  const double R_D = ogd_unit_regret(1, 2.0, T);
  const double R_P = exp3ix_unit_regret(4, T, 0.05);
  const double bound = regret_bound(Setting::OlrcBandit, false, T, 0.5, 0.5,
                                    R_D, R_P, 0.05, 0.05);

  int conforming = 0;
  std::vector<double> final_probs;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RunResult result =
        run_algorithm(spec_for(Setting::OlrcBandit), inst, env, seed);
    const auto [dyn_regret, stat_regret] =
        realized_regrets(result.trace, oracle);
    (void)dyn_regret;
    if (stat_regret <= bound) ++conforming;
    final_probs.push_back(result.trace.outcomes.back().mixture.probs[1]);
  }
  ACC_REQUIRE(conforming >= 18, "only " << conforming
                                        << "/20 seeds within the bound "
                                        << bound);
  const double med = median(final_probs);
  ACC_REQUIRE(med >= 0.9, "median final best-arm probability " << med
                                                               << " < 0.9");
}

// ---------------------------------------------------------------------------
// Criterion 7: meta-procedure on spiky plans with rho_min <= rho/(2 T^{1/4}).
// ---------------------------------------------------------------------------

void criterion_meta() {
  const double rho = 0.4;
  const std::size_t horizons[] = {4096, 16384};
  std::vector<double> meta_medians_per_round;
  std::vector<std::vector<double>> meta_regrets(2);

  bool nonmeta_errored = true;
  std::vector<double> nonmeta_regrets;

  for (int h = 0; h < 2; ++h) {
    const std::size_t T = horizons[h];
    PlanSpec pspec;
    pspec.kind = PlanKind::Spiky;
    pspec.min_entry_scale = 0.0;  // lean rounds get exactly zero budget
    Instance inst;
    inst.horizon = T;
    inst.num_arms = 2;
    inst.num_resources = 1;
    inst.budget = rho * static_cast<double>(T);
    inst.plan = generate_plan(pspec, T, 1, inst.budget);
    const double q = std::pow(static_cast<double>(T), 0.25);
    ACC_REQUIRE(inst.plan.rho_min() <= rho / (2.0 * q),
                "plan is not spiky enough at T " << T);

    const Environment env(stationary_spec(
        {0.0, 0.8}, {{0.0}, {0.9}}, T, EnvKind::Stationary,
        NoiseModel::UniformInterval, 7100 + h, 0.005));
    const MeanProfile profile = profile_from_environment(env);
    OracleReport oracle;
    oracle.opt_dynamic = opt_dynamic(profile, inst.plan).first;
    oracle.opt_static = opt_static(profile, inst.plan);

    AlgorithmSpec meta_spec = spec_for(Setting::Ora);
    meta_spec.meta_rescale = true;
    const double R_D = ogd_unit_regret(1, q / rho, T);
    const double bound = regret_bound(Setting::Ora, /*meta=*/true, T, rho,
                                      inst.plan.rho_min(), R_D, 0.0, 0.05,
                                      0.05);
    int conforming = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const RunResult result = run_algorithm(meta_spec, inst, env, seed);
      ACC_REQUIRE(result.meta_applied, "meta flag not applied");
      const double regret =
          realized_regrets(result.trace, oracle).first;
      meta_regrets[h].push_back(regret);
      if (regret <= bound) ++conforming;
    }
    ACC_REQUIRE(conforming >= 18,
                "T " << T << ": only " << conforming
                     << "/20 meta seeds within the bound " << bound);
    meta_medians_per_round.push_back(median(meta_regrets[h]) /
                                     static_cast<double>(T));

    // The plain variant on the same instance: rho_min is zero, so it must
    // either refuse to run or be soundly beaten by the meta variant.
    for (std::uint64_t seed = 1; seed <= 20 && nonmeta_errored; ++seed) {
      try {
        const RunResult result =
            run_algorithm(spec_for(Setting::Ora), inst, env, seed);
        nonmeta_errored = false;
        nonmeta_regrets.push_back(
            realized_regrets(result.trace, oracle).first);
      } catch (const Error& e) {
        ACC_REQUIRE(e.code() == ErrorCode::ZeroRhoMin,
                    "unexpected error from the plain variant: " << e.what());
      }
    }
  }

  ACC_REQUIRE(meta_medians_per_round[1] < meta_medians_per_round[0],
              "median dynamic regret / T did not decrease: "
                  << meta_medians_per_round[0] << " -> "
                  << meta_medians_per_round[1]);
  if (!nonmeta_errored) {
    const double meta_med = median(meta_regrets[0]);
    const double plain_med = median(nonmeta_regrets);
    ACC_REQUIRE(plain_med >= 1.5 * meta_med,
                "plain variant ran and was not 1.5x worse: " << plain_med
                                                             << " vs "
                                                             << meta_med);
  }
}

// ---------------------------------------------------------------------------
// Criterion 8: epsilon-relaxed baseline robustness.
// ---------------------------------------------------------------------------

void criterion_eps_robustness() {
  const std::size_t T = 400;
  const double rho = 0.25;
  const Environment env(stationary_spec(
      {0.0, 0.9, 0.3}, {{0.0}, {0.8}, {0.1}}, T, EnvKind::Stationary,
      NoiseModel::Bernoulli, 808));
  const Instance inst = uniform_instance(T, 3, 1, rho);
  const MeanProfile profile = profile_from_environment(env);
  const double opt0 = opt_dynamic(profile, inst.plan).first;

  const double R_D = ogd_unit_regret(1, 1.0 / rho, T);
  const double slack =
      regret_bound(Setting::Ora, false, T, rho, rho, R_D, 0.0, 0.05, 0.05);

  const double eps_values[] = {0.0, 0.01, 0.05};
  for (double eps : eps_values) {
    const ErrorSchedule errs = ErrorSchedule::uniform(1, T, eps);
    const double opt_eps =
        opt_dynamic_eps(profile, inst.plan, errs, inst.budget);
    const double eps_total = errs.total();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const RunResult result =
          run_algorithm(spec_for(Setting::Ora), inst, env, seed);
      const double regret_eps = opt_eps - result.trace.total_reward;
      const double regret_base = opt0 - result.trace.total_reward;
      const double lhs = regret_eps - regret_base;
      ACC_REQUIRE(lhs <= eps_total / rho + slack,
                  "eps " << eps << " seed " << seed << ": excess " << lhs
                         << " > " << (eps_total / rho + slack));
      // The sharp inner inequality: the relaxed optimum exceeds the plain
      // one by at most eps_total / rho_min, before any algorithmic slack.
      ACC_REQUIRE(lhs <= eps_total / rho + 1e-6,
                  "eps " << eps << ": baseline gap " << lhs
                         << " exceeds eps_total / rho_min = "
                         << eps_total / rho);
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 9: byte determinism of summary CSVs.
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  ACC_REQUIRE(in.good(), "cannot open " << path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_determinism() {
  const fs::path base =
      fs::temp_directory_path() / "planpace_acceptance_determinism";
  fs::remove_all(base);

  ExperimentConfig cfg;
  cfg.horizon = 400;
  cfg.num_arms = 3;
  cfg.num_resources = 1;
  cfg.rho = 0.25;
  cfg.plan.kind = PlanKind::Uniform;
  cfg.environment.kind = EnvKind::Stationary;
  cfg.environment.noise = NoiseModel::Bernoulli;
  cfg.environment.seed = 909;
  MeanPhase phase;
  phase.reward_means = {0.0, 0.9, 0.3};
  phase.cost_means = {{0.0}, {0.8}, {0.1}};
  cfg.environment.phases = {phase};
  cfg.algorithm = spec_for(Setting::Ora);
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.horizons = {200, 400};

  cfg.out_dir = (base / "first").string();
  execute_runs(cfg, false);

  // Second execution on a forced 3-worker pool must emit identical bytes.
  setenv("PLANPACE_THREADS", "3", 1);
  cfg.out_dir = (base / "second").string();
  execute_runs(cfg, false);
  unsetenv("PLANPACE_THREADS");

  ACC_REQUIRE(slurp(base / "first" / "summary.csv") ==
                  slurp(base / "second" / "summary.csv"),
              "summary.csv bytes differ between executions");
  ACC_REQUIRE(slurp(base / "first" / "run_meta.csv") ==
                  slurp(base / "second" / "run_meta.csv"),
              "run_meta.csv bytes differ between executions");
}

// ---------------------------------------------------------------------------
// Driver.
// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;  // negative: no stated limit
  void (*body)();
};

bool run_criterion(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    c.body();
  } catch (const CheckFailure& f) {
    failure = f.message;
  } catch (const std::exception& e) {
    failure = std::string("unhandled exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const bool in_time = c.limit_seconds < 0.0 || elapsed < c.limit_seconds;
  const bool pass = failure.empty() && in_time;

  std::ostringstream line;
  line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": "
       << c.name << " (" << std::fixed;
  line.precision(1);
  line << elapsed << "s";
  if (c.limit_seconds >= 0.0) {
    line << (in_time ? " < " : " >= ") << c.limit_seconds << "s limit";
  }
  line << ")";
  if (!failure.empty()) line << " — " << failure;
  std::cout << line.str() << std::endl;
  return pass;
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "feasibility under randomized runs", 60.0, criterion_feasibility},
      {2, "oracle correctness vs brute force", 120.0, criterion_oracles},
      {3, "subroutine no-regret (Hedge, OGD)", 120.0, criterion_subroutines},
      {4, "dynamic-regret conformance (observe-then-act)", 300.0,
       criterion_ora_conformance},
      {5, "static-regret conformance (full feedback)", 300.0,
       criterion_olrc_full_conformance},
      {6, "bandit conformance and EXP3-IX concentration", 300.0,
       criterion_bandit},
      {7, "meta-procedure on spiky plans", 600.0, criterion_meta},
      {8, "epsilon-relaxed baseline robustness", 300.0,
       criterion_eps_robustness},
      {9, "byte determinism of summary CSVs", -1.0, criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!run_criterion(c)) ++failures;
  }
  if (failures == 0) {
    std::cout << "all 9 acceptance criteria passed" << std::endl;
    return 0;
  }
  std::cout << failures << " of 9 acceptance criteria failed" << std::endl;
  return 1;
}
