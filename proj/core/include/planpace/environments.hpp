// Seeded generators of (possibly adversarially changing) reward/cost
// distribution sequences and spending plans.  Oracles read exact means;
// simulations read samples.  All randomness is counter-based: every draw is a
// pure function of (seed, round, arm, resource, purpose), so sample paths are
// identical regardless of query order.  This lets full-information and bandit
// runs consume the same realized world for paired comparisons.

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "planpace/core.hpp"

namespace planpace {

// ---------------------------------------------------------------------------
// Counter-based RNG.
// ---------------------------------------------------------------------------

// Stateless randomness: each draw hashes (seed, a, b, c, purpose) through a
// SplitMix64-style finalizer.  Draws are independent across distinct keys and
// reproducible across platforms and query orders.
class CounterRng {
 public:
  // Purposes partition the key space so unrelated draws never collide.
  enum Purpose : std::uint64_t {
    kRewardNoise = 1,
    kCostNoise = 2,
    kSharedNoise = 3,
    kArmSample = 4,
  };

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Raw 64-bit draw for key (a, b, c, purpose).
  std::uint64_t raw(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                    std::uint64_t purpose) const;

  // Uniform double in [0, 1) from the top 53 bits of the raw draw.
  double uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                 std::uint64_t purpose) const;

  // Combines two seeds (e.g. an environment seed and a per-run seed) into a
  // single stream seed.  Symmetric in neither argument, by design.
  static std::uint64_t combine(std::uint64_t outer, std::uint64_t inner);

 private:
  std::uint64_t seed_;
};

// Samples an arm index from a mixture by inverse CDF using the round's
// dedicated substream.
std::size_t sample_arm(const Mixture& mixture, std::size_t t,
                       const CounterRng& rng);

// ---------------------------------------------------------------------------
// Environments.
// ---------------------------------------------------------------------------

enum class EnvKind {
  Stationary,               // one phase throughout
  Piecewise,                // piecewise-constant phases with given boundaries
  Drifting,                 // linear interpolation from first to last phase
  DeterministicAdversarial  // point masses; samples equal the means exactly
};

enum class NoiseModel { Bernoulli, UniformInterval };

// One block of per-arm means.  reward_means has length K; cost_means is K
// rows of length m.  Arm 0 (the void arm) must be identically zero.
struct MeanPhase {
  std::vector<double> reward_means;
  std::vector<std::vector<double>> cost_means;
};

struct EnvironmentSpec {
  EnvKind kind = EnvKind::Stationary;
  std::size_t num_arms = 0;       // K, including the void arm 0
  std::size_t num_resources = 0;  // m
  std::size_t horizon = 0;        // T
  std::vector<MeanPhase> phases;
  // For Piecewise: phase p covers rounds [boundaries[p-1]+1, boundaries[p]]
  // with boundaries strictly increasing and boundaries.back() == T.
  std::vector<std::size_t> phase_boundaries;
  NoiseModel noise = NoiseModel::Bernoulli;
  // Uniform-interval noise half-width; per entry the effective half-width is
  // min(halfwidth, mean, 1 - mean) so the mean is exact without clipping.
  double uniform_halfwidth = 0.1;
  // When set, one shared uniform draw per (t, arm) drives the reward and all
  // costs of that arm, producing correlated F_t, C_t.
  bool shared_noise = false;
  std::uint64_t seed = 0;
};

// Validated wrapper.  Immutable after construction; sampling is pure given
// (seed, t), so the facade is safe to share across threads.
class Environment {
 public:
  explicit Environment(EnvironmentSpec spec);

  const EnvironmentSpec& spec() const { return spec_; }
  std::size_t num_arms() const { return spec_.num_arms; }
  std::size_t num_resources() const { return spec_.num_resources; }
  std::size_t horizon() const { return spec_.horizon; }

 private:
  EnvironmentSpec spec_;
};

// Exact analytic means (fbar_t, cbar_t) for round t (1-based).
std::pair<std::vector<double>, std::vector<std::vector<double>>> mean_round(
    const Environment& env, std::size_t t);

// Realized functions (f_t, c_t) for round t.  Values in [0,1]; arm 0 is
// identically zero; deterministic given (rng seed, t).
std::pair<std::vector<double>, std::vector<std::vector<double>>> sample_round(
    const Environment& env, std::size_t t, const CounterRng& rng);

// Realized (f_t(x), c_t(x)) for a single arm, bitwise identical to the
// corresponding entries of sample_round.
std::pair<double, std::vector<double>> sample_arm_outcome(
    const Environment& env, std::size_t t, std::size_t arm,
    const CounterRng& rng);

// Bandit-run view of an environment: only realized per-arm outcomes are
// reachable.  Mean or full-function access throws BanditHygieneViolation, so
// a bandit algorithm cannot accidentally peek at hidden information.
class BanditFacade {
 public:
  BanditFacade(const Environment& env, const CounterRng& rng)
      : env_(env), rng_(rng) {}

  std::pair<double, std::vector<double>> observe(std::size_t t,
                                                 std::size_t arm) const {
    return sample_arm_outcome(env_, t, arm, rng_);
  }

  [[noreturn]] void full_round(std::size_t t) const;
  [[noreturn]] void means(std::size_t t) const;

 private:
  const Environment& env_;
  CounterRng rng_;
};

// ---------------------------------------------------------------------------
// Spending-plan generators.
// ---------------------------------------------------------------------------

enum class PlanKind { Uniform, Frontloaded, Backloaded, Spiky, CustomMatrix };

struct PlanSpec {
  PlanKind kind = PlanKind::Uniform;
  double budget = 0.0;  // target B = sum of each row
  // Frontloaded/backloaded: geometric profile with this first-to-last ratio.
  double imbalance = 2.0;
  // Spiky: lean entries equal min_entry_scale * rho / T^{1/4} (so
  // rho_min <= rho / T^{1/4} whenever min_entry_scale <= 1; zero is allowed
  // and produces rho_min = 0).
  double min_entry_scale = 0.5;
  // Spiky: number of lean rounds; 0 means "half the horizon".
  std::size_t num_lean_rounds = 0;
  // CustomMatrix: m rows of length T, used verbatim.
  std::vector<std::vector<double>> matrix;
};

// Builds an m x T spending plan with every row summing to B and entries in
// [0,1].  Throws InfeasiblePlanSpec when the requested shape cannot satisfy
// the entry bounds.
SpendingPlan generate_plan(const PlanSpec& spec, std::size_t horizon,
                           std::size_t num_resources, double budget);

// ---------------------------------------------------------------------------
// Fixtures.
// ---------------------------------------------------------------------------

// A two-phase pair of environments that coincide over the first half of the
// horizon and diverge afterwards.  Without a spending plan no single policy
// does well against both dynamic optima; with a plan the pacing information
// resolves the dilemma.  Qualitative demonstration only.
std::pair<EnvironmentSpec, EnvironmentSpec> make_hard_pair(
    std::size_t horizon);

}  // namespace planpace
