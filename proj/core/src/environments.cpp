#include "planpace/environments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace planpace {

namespace {

// SplitMix64 finalizer: a bijective avalanche mix on 64 bits.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_mean(double v, const std::string& what, std::size_t phase,
                std::size_t arm) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::EntryOutOfRange,
                what + " mean " + format_double(v) + " outside [0,1] (phase " +
                    std::to_string(phase) + ", arm " + std::to_string(arm) +
                    ")");
  }
}

void validate_phase(const MeanPhase& phase, std::size_t index, std::size_t K,
                    std::size_t m) {
  if (phase.reward_means.size() != K || phase.cost_means.size() != K) {
    throw Error(ErrorCode::DimensionMismatch,
                "phase " + std::to_string(index) +
                    " does not cover all " + std::to_string(K) + " arms");
  }
  for (std::size_t x = 0; x < K; ++x) {
    check_mean(phase.reward_means[x], "reward", index, x);
    if (phase.cost_means[x].size() != m) {
      throw Error(ErrorCode::DimensionMismatch,
                  "phase " + std::to_string(index) + ", arm " +
                      std::to_string(x) + " has " +
                      std::to_string(phase.cost_means[x].size()) +
                      " cost entries, expected " + std::to_string(m));
    }
    for (double c : phase.cost_means[x]) check_mean(c, "cost", index, x);
  }
  if (phase.reward_means[0] != 0.0) {
    throw Error(ErrorCode::EntryOutOfRange,
                "void arm must have zero reward mean (phase " +
                    std::to_string(index) + ")");
  }
  for (double c : phase.cost_means[0]) {
    if (c != 0.0) {
      throw Error(ErrorCode::EntryOutOfRange,
                  "void arm must have zero cost means (phase " +
                      std::to_string(index) + ")");
    }
  }
}

// The phase index covering round t, plus the interpolation weight for
// drifting environments.
std::size_t phase_index(const EnvironmentSpec& spec, std::size_t t) {
  if (spec.kind != EnvKind::Piecewise &&
      spec.kind != EnvKind::DeterministicAdversarial) {
    return 0;
  }
  if (spec.phase_boundaries.empty()) return 0;
  for (std::size_t p = 0; p < spec.phase_boundaries.size(); ++p) {
    if (t <= spec.phase_boundaries[p]) return p;
  }
  return spec.phase_boundaries.size() - 1;
}

// Exact mean of a single (arm, resource-or-reward) entry at round t.
double mean_entry(const EnvironmentSpec& spec, std::size_t t, std::size_t arm,
                  bool is_reward, std::size_t resource) {
  auto value = [&](const MeanPhase& ph) {
    return is_reward ? ph.reward_means[arm] : ph.cost_means[arm][resource];
  };
  if (spec.kind == EnvKind::Drifting && spec.phases.size() >= 2) {
    const double w =
        spec.horizon > 1
            ? static_cast<double>(t - 1) / static_cast<double>(spec.horizon - 1)
            : 0.0;
    return (1.0 - w) * value(spec.phases.front()) +
           w * value(spec.phases.back());
  }
  return value(spec.phases[phase_index(spec, t)]);
}

// Draws one realized value with the configured noise model around `mean`,
// using uniform variate u in [0,1).
double apply_noise(const EnvironmentSpec& spec, double mean, double u) {
  switch (spec.noise) {
    case NoiseModel::Bernoulli:
      return u < mean ? 1.0 : 0.0;
    case NoiseModel::UniformInterval: {
      const double half =
          std::min({spec.uniform_halfwidth, mean, 1.0 - mean});
      return mean + (2.0 * u - 1.0) * half;
    }
  }
  return mean;
}

double entry_draw(const Environment& env, std::size_t t, std::size_t arm,
                  bool is_reward, std::size_t resource,
                  const CounterRng& rng) {
  const EnvironmentSpec& spec = env.spec();
  const double mean = mean_entry(spec, t, arm, is_reward, resource);
  if (spec.kind == EnvKind::DeterministicAdversarial) return mean;
  double u;
  if (spec.shared_noise) {
    u = rng.uniform(t, arm, 0, CounterRng::kSharedNoise);
  } else if (is_reward) {
    u = rng.uniform(t, arm, 0, CounterRng::kRewardNoise);
  } else {
    u = rng.uniform(t, arm, resource, CounterRng::kCostNoise);
  }
  return apply_noise(spec, mean, u);
}

}  // namespace

std::uint64_t CounterRng::raw(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c, std::uint64_t purpose) const {
  std::uint64_t h = mix64(seed_);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  h = mix64(h ^ purpose);
  return h;
}

double CounterRng::uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           std::uint64_t purpose) const {
  return static_cast<double>(raw(a, b, c, purpose) >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::combine(std::uint64_t outer, std::uint64_t inner) {
  return mix64(mix64(outer) ^ inner);
}

std::size_t sample_arm(const Mixture& mixture, std::size_t t,
                       const CounterRng& rng) {
  if (mixture.probs.empty()) {
    throw Error(ErrorCode::EmptyInput, "sample_arm: empty mixture");
  }
  const double u = rng.uniform(t, 0, 0, CounterRng::kArmSample);
  double acc = 0.0;
  for (std::size_t x = 0; x < mixture.probs.size(); ++x) {
    acc += mixture.probs[x];
    if (u < acc) return x;
  }
  return mixture.probs.size() - 1;  // guard against roundoff at u ~ 1
}

Environment::Environment(EnvironmentSpec spec) : spec_(std::move(spec)) {
  if (spec_.num_arms < 1 || spec_.num_resources < 1 || spec_.horizon < 1) {
    throw Error(ErrorCode::DegenerateDimensions,
                "environment requires K >= 1, m >= 1, T >= 1");
  }
  if (spec_.phases.empty()) {
    throw Error(ErrorCode::EmptyInput, "environment has no mean phases");
  }
  for (std::size_t p = 0; p < spec_.phases.size(); ++p) {
    validate_phase(spec_.phases[p], p, spec_.num_arms, spec_.num_resources);
  }
  if (spec_.kind == EnvKind::Piecewise ||
      (spec_.kind == EnvKind::DeterministicAdversarial &&
       !spec_.phase_boundaries.empty())) {
    if (spec_.phase_boundaries.size() != spec_.phases.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "need one phase boundary per phase");
    }
    std::size_t prev = 0;
    for (std::size_t b : spec_.phase_boundaries) {
      if (b <= prev || b > spec_.horizon) {
        throw Error(ErrorCode::InvalidParameters,
                    "phase boundaries must be strictly increasing and <= T");
      }
      prev = b;
    }
    if (spec_.phase_boundaries.back() != spec_.horizon) {
      throw Error(ErrorCode::InvalidParameters,
                  "last phase boundary must equal the horizon");
    }
  }
  if (spec_.noise == NoiseModel::UniformInterval &&
      !(spec_.uniform_halfwidth >= 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "uniform-interval half-width must be nonnegative");
  }
}

std::pair<std::vector<double>, std::vector<std::vector<double>>> mean_round(
    const Environment& env, std::size_t t) {
  const EnvironmentSpec& spec = env.spec();
  std::vector<double> fbar(spec.num_arms, 0.0);
  std::vector<std::vector<double>> cbar(
      spec.num_arms, std::vector<double>(spec.num_resources, 0.0));
  for (std::size_t x = 1; x < spec.num_arms; ++x) {
    fbar[x] = mean_entry(spec, t, x, true, 0);
    for (std::size_t i = 0; i < spec.num_resources; ++i) {
      cbar[x][i] = mean_entry(spec, t, x, false, i);
    }
  }
  return {std::move(fbar), std::move(cbar)};
}

std::pair<std::vector<double>, std::vector<std::vector<double>>> sample_round(
    const Environment& env, std::size_t t, const CounterRng& rng) {
  const EnvironmentSpec& spec = env.spec();
  std::vector<double> f(spec.num_arms, 0.0);
  std::vector<std::vector<double>> c(
      spec.num_arms, std::vector<double>(spec.num_resources, 0.0));
  for (std::size_t x = 1; x < spec.num_arms; ++x) {
    f[x] = entry_draw(env, t, x, true, 0, rng);
    for (std::size_t i = 0; i < spec.num_resources; ++i) {
      c[x][i] = entry_draw(env, t, x, false, i, rng);
    }
  }
  return {std::move(f), std::move(c)};
}

std::pair<double, std::vector<double>> sample_arm_outcome(
    const Environment& env, std::size_t t, std::size_t arm,
    const CounterRng& rng) {
  const EnvironmentSpec& spec = env.spec();
  if (arm >= spec.num_arms) {
    throw Error(ErrorCode::InvalidParameters,
                "arm index out of range in sample_arm_outcome");
  }
  std::vector<double> costs(spec.num_resources, 0.0);
  if (arm == 0) return {0.0, std::move(costs)};
  const double reward = entry_draw(env, t, arm, true, 0, rng);
  for (std::size_t i = 0; i < spec.num_resources; ++i) {
    costs[i] = entry_draw(env, t, arm, false, i, rng);
  }
  return {reward, std::move(costs)};
}

void BanditFacade::full_round(std::size_t t) const {
  throw Error(ErrorCode::BanditHygieneViolation,
              "full reward/cost functions requested at round " +
                  std::to_string(t) + " during a bandit run");
}

void BanditFacade::means(std::size_t t) const {
  throw Error(ErrorCode::BanditHygieneViolation,
              "distribution means requested at round " + std::to_string(t) +
                  " during a bandit run");
}

SpendingPlan generate_plan(const PlanSpec& spec, std::size_t horizon,
                           std::size_t num_resources, double budget) {
  if (horizon == 0 || num_resources == 0) {
    throw Error(ErrorCode::DegenerateDimensions,
                "plan generation requires T >= 1 and m >= 1");
  }
  if (!(budget > 0.0) || budget > static_cast<double>(horizon)) {
    throw Error(ErrorCode::InfeasiblePlanSpec,
                "budget must lie in (0, T] so entries can fit in [0,1]");
  }
  const double T = static_cast<double>(horizon);
  const double rho = budget / T;

  std::vector<double> row(horizon, 0.0);
  switch (spec.kind) {
    case PlanKind::Uniform: {
      std::fill(row.begin(), row.end(), rho);
      break;
    }
    case PlanKind::Frontloaded:
    case PlanKind::Backloaded: {
      if (!(spec.imbalance > 0.0)) {
        throw Error(ErrorCode::InfeasiblePlanSpec,
                    "imbalance ratio must be positive");
      }
      // Geometric profile with first-to-last ratio `imbalance`, then
      // renormalized so the row sums to B exactly.
      double sum = 0.0;
      for (std::size_t t = 0; t < horizon; ++t) {
        const double frac =
            horizon > 1
                ? static_cast<double>(t) / static_cast<double>(horizon - 1)
                : 0.0;
        row[t] = std::pow(spec.imbalance, -frac);
        sum += row[t];
      }
      for (double& v : row) v *= budget / sum;
      if (spec.kind == PlanKind::Backloaded) {
        std::reverse(row.begin(), row.end());
      }
      break;
    }
    case PlanKind::Spiky: {
      if (spec.min_entry_scale < 0.0) {
        throw Error(ErrorCode::InfeasiblePlanSpec,
                    "spiky min-entry scale must be nonnegative");
      }
      std::size_t lean = spec.num_lean_rounds;
      if (lean == 0) lean = horizon / 2;
      if (lean >= horizon) {
        throw Error(ErrorCode::InfeasiblePlanSpec,
                    "spiky plan needs at least one non-lean round");
      }
      const double low = spec.min_entry_scale * rho / std::pow(T, 0.25);
      const double high = (budget - static_cast<double>(lean) * low) /
                          static_cast<double>(horizon - lean);
      if (high < low) {
        throw Error(ErrorCode::InfeasiblePlanSpec,
                    "spiky lean level exceeds the per-round average");
      }
      std::fill(row.begin(), row.end(), high);
      if (lean == 0) break;  // degenerate tiny horizon: plan is uniform
      // Spread the lean rounds evenly over the horizon.
      const std::size_t stride = horizon / lean;
      std::size_t placed = 0;
      for (std::size_t t = 0; t < horizon && placed < lean; t += stride) {
        row[t] = low;
        ++placed;
      }
      // Stride truncation can leave stragglers; fill from the tail.
      for (std::size_t t = horizon; placed < lean && t > 0; --t) {
        if (row[t - 1] != low) {
          row[t - 1] = low;
          ++placed;
        }
      }
      // Restore the row sum exactly by shifting the residual onto the
      // non-lean rounds.
      double sum = 0.0;
      for (double v : row) sum += v;
      const double residual = (budget - sum) / static_cast<double>(horizon - lean);
      for (double& v : row) {
        if (v != low) v += residual;
      }
      break;
    }
    case PlanKind::CustomMatrix: {
      if (spec.matrix.size() != num_resources) {
        throw Error(ErrorCode::DimensionMismatch,
                    "custom plan matrix must have one row per resource");
      }
      SpendingPlan plan;
      plan.num_resources = num_resources;
      plan.horizon = horizon;
      plan.entries.reserve(num_resources * horizon);
      for (const auto& r : spec.matrix) {
        if (r.size() != horizon) {
          throw Error(ErrorCode::DimensionMismatch,
                      "custom plan row length must equal the horizon");
        }
        plan.entries.insert(plan.entries.end(), r.begin(), r.end());
      }
      return plan;
    }
  }

  for (double v : row) {
    if (v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::InfeasiblePlanSpec,
                  "generated plan entry " + format_double(v) +
                      " falls outside [0,1]");
    }
  }
  SpendingPlan plan;
  plan.num_resources = num_resources;
  plan.horizon = horizon;
  plan.entries.reserve(num_resources * horizon);
  for (std::size_t i = 0; i < num_resources; ++i) {
    plan.entries.insert(plan.entries.end(), row.begin(), row.end());
  }
  return plan;
}

std::pair<EnvironmentSpec, EnvironmentSpec> make_hard_pair(
    std::size_t horizon) {
  // Phase 1 (first half): one arm with mid reward and full cost.  Phase 2:
  // in world A the arm becomes worthless, in world B it becomes perfect.
  // Spending now is right in A and wrong in B, so without pacing guidance no
  // single phase-1 behavior suits both worlds.
  auto make = [&](double late_reward) {
    EnvironmentSpec spec;
    spec.kind = EnvKind::Piecewise;
    spec.num_arms = 2;
    spec.num_resources = 1;
    spec.horizon = horizon;
    MeanPhase early;
    early.reward_means = {0.0, 0.5};
    early.cost_means = {{0.0}, {1.0}};
    MeanPhase late;
    late.reward_means = {0.0, late_reward};
    late.cost_means = {{0.0}, {1.0}};
    spec.phases = {early, late};
    spec.phase_boundaries = {horizon / 2, horizon};
    spec.noise = NoiseModel::Bernoulli;
    return spec;
  };
  return {make(0.0), make(1.0)};
}

}  // namespace planpace
