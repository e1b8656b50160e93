// Micro-benchmarks for the hot paths: simplex solves, minimizer steps, plan
// generation, environment sampling, and full algorithm runs.  Figures are
// per-iteration; SetItemsProcessed reports rounds/sec for the run loops.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "planpace/algorithms.hpp"
#include "planpace/core.hpp"
#include "planpace/environments.hpp"
#include "planpace/lp.hpp"
#include "planpace/minimizers.hpp"
#include "planpace/oracles.hpp"

using namespace planpace;

namespace {

EnvironmentSpec bench_env_spec(std::size_t K, std::size_t m, std::size_t T) {
  EnvironmentSpec spec;
  spec.kind = EnvKind::Stationary;
  spec.num_arms = K;
  spec.num_resources = m;
  spec.horizon = T;
  MeanPhase phase;
  phase.reward_means.assign(K, 0.0);
  phase.cost_means.assign(K, std::vector<double>(m, 0.0));
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (std::size_t x = 1; x < K; ++x) {
    phase.reward_means[x] = unit(gen);
    for (std::size_t i = 0; i < m; ++i) phase.cost_means[x][i] = unit(gen);
  }
  spec.phases = {phase};
  spec.noise = NoiseModel::Bernoulli;
  spec.seed = 99;
  return spec;
}

Instance bench_instance(std::size_t T, std::size_t K, std::size_t m,
                        double rho) {
  Instance inst;
  inst.horizon = T;
  inst.num_arms = K;
  inst.num_resources = m;
  inst.budget = rho * static_cast<double>(T);
  inst.plan = SpendingPlan(m, T, rho);
  return inst;
}

// One per-round oracle LP: K mixture weights, m resource rows, simplex row.
LinearProgram round_relaxation(std::size_t K, std::size_t m) {
  std::mt19937_64 gen(34);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LinearProgram lp;
  lp.n = K;
  lp.c.assign(K, 0.0);
  for (std::size_t x = 1; x < K; ++x) lp.c[x] = unit(gen);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(K, 0.0);
    for (std::size_t x = 1; x < K; ++x) row[x] = unit(gen);
    lp.add_inequality(row, 0.4);
  }
  lp.add_equality(std::vector<double>(K, 1.0), 1.0);
  return lp;
}

void BM_ProjectL1Ball(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(56);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::vector<double> point(m);
  for (double& v : point) v = coord(gen);
  for (auto _ : state) {
    BallProjectionInput input{point, 1.0};
    benchmark::DoNotOptimize(project_l1_ball(input));
  }
}
BENCHMARK(BM_ProjectL1Ball)->Arg(2)->Arg(8)->Arg(32);

void BM_HedgeUpdate(benchmark::State& state) {
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(78);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> weights(K, 1.0);
  std::vector<double> payoffs(K);
  for (double& p : payoffs) p = unit(gen);
  for (auto _ : state) {
    weights = hedge_update(weights, payoffs, 0.05);
    benchmark::DoNotOptimize(weights);
  }
}
BENCHMARK(BM_HedgeUpdate)->Arg(4)->Arg(16)->Arg(64);

void BM_Exp3IxStep(benchmark::State& state) {
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  MinimizerConfig config;
  config.horizon_hint = 100000;
  Exp3IxState exp3 = Exp3IxState::make(K, config);
  std::mt19937_64 gen(90);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t arm = 1;
  for (auto _ : state) {
    exp3ix_step(exp3, arm, unit(gen));
    arm = (arm + 1) % K;
    benchmark::DoNotOptimize(exp3.log_weights);
  }
}
BENCHMARK(BM_Exp3IxStep)->Arg(4)->Arg(16);

void BM_SolveRoundRelaxation(benchmark::State& state) {
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  const LinearProgram lp = round_relaxation(K, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lp(lp));
  }
}
BENCHMARK(BM_SolveRoundRelaxation)->Arg(4)->Arg(16)->Arg(64);

void BM_OptDynamic(benchmark::State& state) {
  const std::size_t T = static_cast<std::size_t>(state.range(0));
  const Environment env(bench_env_spec(8, 2, T));
  const MeanProfile profile = profile_from_environment(env);
  const SpendingPlan plan(2, T, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opt_dynamic(profile, plan));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(T));
}
BENCHMARK(BM_OptDynamic)->Arg(256)->Arg(1024);

void BM_SampleRound(benchmark::State& state) {
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  const Environment env(bench_env_spec(K, 2, 1024));
  CounterRng rng(7);
  std::size_t t = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_round(env, t, rng));
    t = t % 1024 + 1;
  }
}
BENCHMARK(BM_SampleRound)->Arg(4)->Arg(32);

void BM_GeneratePlanSpiky(benchmark::State& state) {
  const std::size_t T = static_cast<std::size_t>(state.range(0));
  PlanSpec spec;
  spec.kind = PlanKind::Spiky;
  const double budget = 0.3 * static_cast<double>(T);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_plan(spec, T, 2, budget));
  }
}
BENCHMARK(BM_GeneratePlanSpiky)->Arg(4096)->Arg(65536);

void BM_RunOra(benchmark::State& state) {
  const std::size_t T = static_cast<std::size_t>(state.range(0));
  const Environment env(bench_env_spec(4, 2, T));
  const Instance inst = bench_instance(T, 4, 2, 0.3);
  AlgorithmSpec spec;
  spec.setting = Setting::Ora;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_algorithm(spec, inst, env, 11));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(T));
}
BENCHMARK(BM_RunOra)->Arg(1024)->Arg(4096);

void BM_RunBandit(benchmark::State& state) {
  const std::size_t T = static_cast<std::size_t>(state.range(0));
  const Environment env(bench_env_spec(4, 2, T));
  const Instance inst = bench_instance(T, 4, 2, 0.3);
  AlgorithmSpec spec;
  spec.setting = Setting::OlrcBandit;
  spec.primal_kind = PrimalKind::Exp3Ix;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_algorithm(spec, inst, env, 11));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(T));
}
BENCHMARK(BM_RunBandit)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
