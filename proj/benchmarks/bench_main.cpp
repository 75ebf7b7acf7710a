#include <benchmark/benchmark.h>

#include "pgreuse/divergence.hpp"
#include "pgreuse/env.hpp"
#include "pgreuse/estimators.hpp"
#include "pgreuse/rollout.hpp"

namespace {

using namespace pgreuse;

LinearGaussianPolicy make_policy(int ds, int da, double drift) {
  RngStream rng(7);
  return {Vec(0.3 * rng.normal_vec(ds * da).array() + drift), ds, da, 0.3};
}

std::vector<Trajectory> make_batch(const LinearGaussianPolicy& pol, int n, int T, int id) {
  RngStream rng(11 + id);
  std::vector<Trajectory> batch;
  for (int j = 0; j < n; ++j) {
    Trajectory traj;
    traj.behavior_id = id;
    for (int t = 0; t < T; ++t) {
      const Vec s = rng.normal_vec(pol.state_dim());
      const Vec a = pol.sample_action(s, rng);
      traj.states.push_back(s);
      traj.actions.push_back(a);
      traj.rewards.push_back(rng.uniform());
      traj.behavior_logliks.push_back(pol.step_logdensity(s, a));
      traj.behavior_means.push_back(pol.mean_action(s));
    }
    batch.push_back(std::move(traj));
  }
  return batch;
}

void BM_CartPoleRollout(benchmark::State& state) {
  CartPoleEnv env(200, 1.0);
  LinearGaussianPolicy policy(Vec::Zero(4), 4, 1, 0.3);
  std::uint64_t seed = 0;
  long steps = 0;
  for (auto _ : state) {
    RngStream rng(++seed);
    Trajectory traj = rollout(env, policy, rng);
    steps += traj.length();
    benchmark::DoNotOptimize(traj);
  }
  state.SetItemsProcessed(steps);
}
BENCHMARK(BM_CartPoleRollout);

void BM_GpomdpGrad(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  LinearGaussianPolicy pol = make_policy(4, 1, 0.0);
  const auto batch = make_batch(pol, 1, T, 1);
  for (auto _ : state) {
    Vec g = gpomdp_grad(pol, batch[0], 1.0);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_GpomdpGrad)->Arg(50)->Arg(200);

void BM_MpmEstimate(benchmark::State& state) {
  const int omega = static_cast<int>(state.range(0));
  const int n = 32 / omega;
  WindowBuffer buffer(0);
  LinearGaussianPolicy pol = make_policy(4, 1, 0.0);
  for (int k = 1; k <= omega; ++k) {
    buffer.push(k, pol, make_batch(pol, n, 100, k));
    pol = LinearGaussianPolicy(Vec(pol.params().array() + 0.01), 4, 1, 0.3);
  }
  MpmCoefficients coeffs = simple_theory_schedule(2.0, n, omega);
  for (auto _ : state) {
    GradientEstimate est = mpm_estimate(pol, buffer, coeffs, 1.0);
    benchmark::DoNotOptimize(est);
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_MpmEstimate)->Arg(1)->Arg(4)->Arg(8);

void BM_BhEstimate(benchmark::State& state) {
  const int omega = static_cast<int>(state.range(0));
  const int n = 32 / omega;
  WindowBuffer buffer(0, BufferMode::RetainPolicies);
  LinearGaussianPolicy pol = make_policy(4, 1, 0.0);
  for (int k = 1; k <= omega; ++k) {
    buffer.push(k, pol, make_batch(pol, n, 100, k));
    pol = LinearGaussianPolicy(Vec(pol.params().array() + 0.01), 4, 1, 0.3);
  }
  for (auto _ : state) {
    GradientEstimate est = bh_estimate(pol, buffer, 1.0);
    benchmark::DoNotOptimize(est);
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_BhEstimate)->Arg(4)->Arg(8);

void BM_StepProductDivergence(benchmark::State& state) {
  LinearGaussianPolicy behavior = make_policy(4, 1, 0.0);
  LinearGaussianPolicy target = make_policy(4, 1, 0.05);
  const auto batch = make_batch(behavior, 8, 200, 1);
  for (auto _ : state) {
    double d = chi2_hat_cached(target, batch);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * 8 * 200);
}
BENCHMARK(BM_StepProductDivergence);

}  // namespace

BENCHMARK_MAIN();
