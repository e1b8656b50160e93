#include "planpace/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace planpace {

namespace {

void check_env_match(const Instance& inst, const Environment& env) {
  if (env.num_arms() != inst.num_arms ||
      env.num_resources() != inst.num_resources ||
      env.horizon() != inst.horizon) {
    throw Error(ErrorCode::DimensionMismatch,
                "environment dimensions do not match the instance");
  }
}

// Expected spend per resource under mixture xi of the realized cost function.
std::vector<double> expected_spend(const std::vector<std::vector<double>>& c,
                                   const Mixture& xi) {
  const std::size_t m = c.empty() ? 0 : c[0].size();
  std::vector<double> spend(m, 0.0);
  for (std::size_t x = 0; x < c.size(); ++x) {
    const double p = xi.probs[x];
    if (p == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) spend[i] += p * c[x][i];
  }
  return spend;
}

std::vector<double> plan_column(const SpendingPlan& plan, std::size_t t) {
  std::vector<double> column(plan.num_resources);
  for (std::size_t i = 0; i < plan.num_resources; ++i) {
    column[i] = plan.entry(i, t - 1);
  }
  return column;
}

bool masked(const SkipMask* mask, std::size_t t) {
  return mask != nullptr && (*mask)[t - 1];
}

// Record for a masked round: the void arm is played, budgets are untouched
// and no minimizer consumes feedback.  lambda is logged for trace continuity.
RoundOutcome skipped_outcome(std::size_t t, std::size_t num_arms,
                             const std::vector<double>& remaining,
                             const LagrangeVector& lambda) {
  RoundOutcome o;
  o.t = t;
  o.mixture = Mixture::void_dirac(num_arms);
  o.arm = 0;
  o.reward = 0.0;
  o.costs.assign(remaining.size(), 0.0);
  o.remaining_budgets = remaining;
  o.lambda = lambda;
  o.forced_void = false;
  o.skipped = true;
  return o;
}

void note_stop_time(RunTrace& trace, const std::vector<double>& remaining,
                    std::size_t t) {
  if (trace.stop_time == 0 && should_force_void(remaining)) {
    trace.stop_time = t;
  }
}

}  // namespace

void AlgorithmSpec::validate() const {
  if (meta_rescale && void_skip) {
    throw Error(ErrorCode::InvalidParameters,
                "meta_rescale and void_skip are mutually exclusive");
  }
  switch (setting) {
    case Setting::Ora:
      if (primal_kind != PrimalKind::None) {
        throw Error(ErrorCode::InvalidParameters,
                    "ORA takes no primal regret minimizer");
      }
      break;
    case Setting::OlrcFull:
      if (primal_kind != PrimalKind::Hedge) {
        throw Error(ErrorCode::InvalidParameters,
                    "OLRC with full feedback requires the hedge primal");
      }
      break;
    case Setting::OlrcBandit:
      if (primal_kind != PrimalKind::Exp3Ix) {
        throw Error(ErrorCode::InvalidParameters,
                    "OLRC with bandit feedback requires the exp3ix primal");
      }
      break;
  }
  if (!(delta > 0.0 && delta < 1.0) || !(delta_P > 0.0 && delta_P < 1.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "confidence parameters must lie in (0,1)");
  }
}

LagrangianTerms best_response_terms(const std::vector<double>& f,
                                    const std::vector<std::vector<double>>& c,
                                    const Mixture& xi,
                                    const LagrangeVector& lambda) {
  LagrangianTerms terms;
  for (std::size_t x = 0; x < f.size(); ++x) {
    terms.reward_part += xi.probs[x] * f[x];
  }
  const std::vector<double> spend = expected_spend(c, xi);
  for (std::size_t i = 0; i < spend.size(); ++i) {
    terms.penalty_part += lambda.values[i] * spend[i];
  }
  terms.value = terms.reward_part - terms.penalty_part;
  return terms;
}

LagrangianTerms analysis_terms(const std::vector<double>& f,
                               const std::vector<std::vector<double>>& c,
                               const std::vector<double>& plan_column,
                               const Mixture& xi,
                               const LagrangeVector& lambda) {
  LagrangianTerms terms = best_response_terms(f, c, xi, lambda);
  double plan_term = 0.0;
  for (std::size_t i = 0; i < plan_column.size(); ++i) {
    plan_term += lambda.values[i] * plan_column[i];
  }
  terms.value = terms.reward_part + plan_term - terms.penalty_part;
  return terms;
}

Mixture ora_best_response(const std::vector<double>& f,
                          const std::vector<std::vector<double>>& c,
                          const LagrangeVector& lambda) {
  if (f.empty() || c.size() != f.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "best response needs matching reward and cost arities");
  }
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    double score = f[x];
    for (std::size_t i = 0; i < lambda.values.size(); ++i) {
      score -= lambda.values[i] * c[x][i];
    }
    // Strict improvement only: equal scores keep the lower index.
    if (x == 0 || score > best_score) {
      best = x;
      best_score = score;
    }
  }
  Mixture xi = Mixture::void_dirac(f.size());
  xi.probs[0] = 0.0;
  xi.probs[best] = 1.0;
  return xi;
}

RunTrace run_ora(const Instance& inst, const Environment& env,
                 DualMinimizer& dual, const CounterRng& rng,
                 const SkipMask* mask) {
  check_env_match(inst, env);
  const std::size_t T = inst.horizon;
  const std::size_t m = inst.num_resources;
  RunTrace trace;
  trace.outcomes.reserve(T);
  std::vector<double> remaining(m, inst.budget);
  LagrangeVector lambda = dual.select();

  for (std::size_t t = 1; t <= T; ++t) {
    if (masked(mask, t)) {
      trace.outcomes.push_back(
          skipped_outcome(t, inst.num_arms, remaining, lambda));
      continue;
    }
    auto [f, c] = sample_round(env, t, rng);
    const Mixture xi = ora_best_response(f, c, lambda);
    const bool gate = should_force_void(remaining);
    const std::size_t arm = gate ? 0 : sample_arm(xi, t, rng);
    const double reward = f[arm];
    remaining = update_budget(remaining, c[arm]);
    note_stop_time(trace, remaining, t);

    RoundOutcome o;
    o.t = t;
    o.mixture = xi;
    o.arm = arm;
    o.reward = reward;
    o.costs = c[arm];
    o.remaining_budgets = remaining;
    o.lambda = lambda;
    o.forced_void = gate;
    trace.outcomes.push_back(std::move(o));
    trace.total_reward += reward;

    // Dual feedback r_t^D(lambda) = -sum_i lambda[i](B_t - E_xi[c_t[i]]);
    // its gradient in lambda is (expected spend - plan entry).
    std::vector<double> gradient = expected_spend(c, xi);
    const std::vector<double> plan_t = plan_column(inst.plan, t);
    for (std::size_t i = 0; i < m; ++i) gradient[i] -= plan_t[i];
    dual.receive(gradient);
    lambda = dual.select();
  }
  if (trace.stop_time == 0) trace.stop_time = T;
  return trace;
}

RunTrace run_olrc_full(const Instance& inst, const Environment& env,
                       HedgePrimal& primal, DualMinimizer& dual,
                       const CounterRng& rng, const SkipMask* mask) {
  check_env_match(inst, env);
  const std::size_t T = inst.horizon;
  const std::size_t m = inst.num_resources;
  RunTrace trace;
  trace.outcomes.reserve(T);
  std::vector<double> remaining(m, inst.budget);

  for (std::size_t t = 1; t <= T; ++t) {
    if (masked(mask, t)) {
      trace.outcomes.push_back(
          skipped_outcome(t, inst.num_arms, remaining, dual.select()));
      continue;
    }
    const Mixture xi = primal.select();
    const bool gate = should_force_void(remaining);
    const std::size_t arm = gate ? 0 : sample_arm(xi, t, rng);
    auto [f, c] = sample_round(env, t, rng);  // full feedback, post-play
    const double reward = f[arm];
    remaining = update_budget(remaining, c[arm]);
    note_stop_time(trace, remaining, t);
    const LagrangeVector lambda = dual.select();  // fetched after playing

    RoundOutcome o;
    o.t = t;
    o.mixture = xi;
    o.arm = arm;
    o.reward = reward;
    o.costs = c[arm];
    o.remaining_budgets = remaining;
    o.lambda = lambda;
    o.forced_void = gate;
    trace.outcomes.push_back(std::move(o));
    trace.total_reward += reward;

    // Primal payoff vector over arms: f_t(x) - sum_i lambda_t[i] c_t(x)[i].
    std::vector<double> payoffs(inst.num_arms, 0.0);
    for (std::size_t x = 0; x < inst.num_arms; ++x) {
      double v = f[x];
      for (std::size_t i = 0; i < m; ++i) v -= lambda.values[i] * c[x][i];
      payoffs[x] = v;
    }
    primal.receive(payoffs);

    // Dual gradient from the expected spend under xi_t.
    std::vector<double> gradient = expected_spend(c, xi);
    const std::vector<double> plan_t = plan_column(inst.plan, t);
    for (std::size_t i = 0; i < m; ++i) gradient[i] -= plan_t[i];
    dual.receive(gradient);
  }
  if (trace.stop_time == 0) trace.stop_time = T;
  return trace;
}

RunTrace run_olrc_bandit(const Instance& inst, const Environment& env,
                         Exp3IxPrimal& primal, DualMinimizer& dual,
                         const CounterRng& rng, const SkipMask* mask) {
  check_env_match(inst, env);
  const std::size_t T = inst.horizon;
  const std::size_t m = inst.num_resources;
  // All environment access below goes through the facade, which exposes only
  // the played arm's realized values.
  const BanditFacade facade(env, rng);
  RunTrace trace;
  trace.outcomes.reserve(T);
  std::vector<double> remaining(m, inst.budget);

  for (std::size_t t = 1; t <= T; ++t) {
    if (masked(mask, t)) {
      trace.outcomes.push_back(
          skipped_outcome(t, inst.num_arms, remaining, dual.select()));
      continue;
    }
    const Mixture xi = primal.select();
    const bool gate = should_force_void(remaining);
    const std::size_t arm = gate ? 0 : sample_arm(xi, t, rng);
    auto [reward, costs] = facade.observe(t, arm);
    remaining = update_budget(remaining, costs);
    note_stop_time(trace, remaining, t);
    const LagrangeVector lambda = dual.select();  // fetched after playing

    RoundOutcome o;
    o.t = t;
    o.mixture = xi;
    o.arm = arm;
    o.reward = reward;
    o.costs = costs;
    o.remaining_budgets = remaining;
    o.lambda = lambda;
    o.forced_void = gate;
    trace.outcomes.push_back(std::move(o));
    trace.total_reward += reward;

    // Scalar primal feedback at the played arm.
    double scalar = reward;
    for (std::size_t i = 0; i < m; ++i) scalar -= lambda.values[i] * costs[i];
    primal.receive(arm, scalar);

    // Dual gradient from the realized cost of the played arm.
    std::vector<double> gradient = costs;
    const std::vector<double> plan_t = plan_column(inst.plan, t);
    for (std::size_t i = 0; i < m; ++i) gradient[i] -= plan_t[i];
    dual.receive(gradient);
  }
  if (trace.stop_time == 0) trace.stop_time = T;
  return trace;
}

std::pair<double, Instance> meta_transform(const Instance& inst) {
  const double rho = inst.rho();
  if (!(rho > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "meta_transform requires rho = B/T > 0");
  }
  const double T = static_cast<double>(inst.horizon);
  const double q = std::pow(T, 0.25);
  const double rho_hat = rho / q;
  Instance rescaled = inst;  // budget intentionally unchanged
  const double factor = 1.0 - 1.0 / q;
  for (double& v : rescaled.plan.entries) v *= factor;
  return {rho_hat, std::move(rescaled)};
}

VoidSkipResult void_skip_preprocess(const Instance& inst, double threshold) {
  const std::size_t T = inst.horizon;
  const std::size_t m = inst.num_resources;
  if (threshold < 0.0) {
    threshold = inst.rho() / std::pow(static_cast<double>(T), 0.25);
  }
  VoidSkipResult result;
  result.mask.assign(T, false);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      if (inst.plan.entry(i, t) < threshold) {
        result.mask[t] = true;
        break;
      }
    }
    if (result.mask[t]) ++result.masked_count;
  }
  if (static_cast<double>(result.masked_count) >
      std::sqrt(static_cast<double>(T))) {
    throw Error(ErrorCode::RefusePreprocess,
                std::to_string(result.masked_count) +
                    " sub-threshold rounds exceed sqrt(T); use the "
                    "meta-procedure instead");
  }
  result.reduced = inst;
  result.reduced.horizon = T - result.masked_count;
  result.reduced.plan = SpendingPlan(m, result.reduced.horizon);
  double lo = 1.0;
  std::size_t col = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (result.mask[t]) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = inst.plan.entry(i, t);
      result.reduced.plan.entry(i, col) = v;
      lo = std::min(lo, v);
    }
    ++col;
  }
  result.reduced_rho_min = result.reduced.horizon == 0 ? 0.0 : lo;
  return result;
}

RunResult run_algorithm(const AlgorithmSpec& spec, const Instance& inst,
                        const Environment& env, std::uint64_t run_seed) {
  spec.validate();
  validate_instance(inst);
  check_env_match(inst, env);
  const CounterRng rng(CounterRng::combine(env.spec().seed, run_seed));

  // Resolve the effective instance, skip mask and Slater value.
  RunResult result;
  Instance effective = inst;
  SkipMask mask;
  double rho_min_used = 0.0;
  if (spec.meta_rescale) {
    auto [rho_hat, rescaled] = meta_transform(inst);
    effective = std::move(rescaled);
    rho_min_used = rho_hat;
    result.meta_applied = true;
  } else if (spec.void_skip) {
    VoidSkipResult vs = void_skip_preprocess(inst);
    mask = std::move(vs.mask);
    rho_min_used = vs.reduced_rho_min;
    result.void_skipped_rounds = vs.masked_count;
  } else {
    rho_min_used = inst.plan.rho_min();
  }
  if (!(rho_min_used > 0.0)) {
    throw Error(ErrorCode::ZeroRhoMin,
                "plan minimum entry is zero; enable meta_rescale or "
                "void_skip to proceed");
  }
  result.rho_min_used = rho_min_used;

  const double radius = 1.0 / rho_min_used;  // dual ball radius 1/rho_min
  const SkipMask* mask_ptr = mask.empty() ? nullptr : &mask;
  auto dual = make_dual_minimizer(spec.dual_kind, inst.num_resources, radius,
                                  inst.horizon);

  switch (spec.setting) {
    case Setting::Ora: {
      result.trace = run_ora(effective, env, *dual, rng, mask_ptr);
      break;
    }
    case Setting::OlrcFull: {
      MinimizerConfig config;
      config.payoff_lo = -radius;       // Lagrangian payoff range
      config.payoff_hi = 1.0 + radius;  // [-1/rho_min, 1 + 1/rho_min]
      config.horizon_hint = inst.horizon;
      HedgePrimal primal(inst.num_arms, config);
      result.trace =
          run_olrc_full(effective, env, primal, *dual, rng, mask_ptr);
      result.clamp_events += primal.clamp_events();
      break;
    }
    case Setting::OlrcBandit: {
      MinimizerConfig config;
      config.payoff_lo = -radius;
      config.payoff_hi = 1.0 + radius;
      config.horizon_hint = inst.horizon;
      Exp3IxPrimal primal(inst.num_arms, config);
      result.trace =
          run_olrc_bandit(effective, env, primal, *dual, rng, mask_ptr);
      result.clamp_events += primal.clamp_events();
      break;
    }
  }
  result.clamp_events += dual->clamp_events();
  return result;
}

}  // namespace planpace
