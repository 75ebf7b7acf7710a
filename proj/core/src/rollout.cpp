#include "pgreuse/rollout.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace pgreuse {

Trajectory rollout(const Environment& env, const Policy& policy, RngStream& rng,
                   int behavior_id) {
  const EnvironmentSpec& spec = env.spec();
  if (policy.action_dim() != spec.action_dim)
    throw Fault("rollout: policy action dimension does not match environment");

  Trajectory traj;
  traj.behavior_id = behavior_id;
  Vec state = env.reset(rng);
  for (int t = 0; t < spec.horizon; ++t) {
    if (!state.allFinite())
      throw Fault("rollout: non-finite state at step " + std::to_string(t));
    const Vec action = policy.sample_action(state, rng);
    if (!action.allFinite())
      throw Fault("rollout: non-finite action at step " + std::to_string(t));
    traj.states.push_back(state);
    traj.actions.push_back(action);
    traj.behavior_logliks.push_back(policy.step_logdensity(state, action));
    Vec mean = policy.mean_action(state);
    if (mean.size() > 0) traj.behavior_means.push_back(std::move(mean));

    StepResult res = env.step(state, action, rng);
    if (std::abs(res.reward) > spec.reward_bound + 1e-12)
      throw Fault("rollout: reward exceeds declared bound at step " + std::to_string(t));
    traj.rewards.push_back(res.reward);
    state = std::move(res.next_state);
    if (res.done) break;
  }
  return traj;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  const int n_workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::vector<Trajectory> collect_batch(const Environment& env, const Policy& policy, int n,
                                      std::uint64_t master, int iteration, int threads) {
  std::vector<Trajectory> batch(n);
  parallel_for(n, threads, [&](int j) {
    RngStream rng = RngStream::derive(master, 0x726f6c6cULL, iteration, j);
    batch[j] = rollout(env, policy, rng, iteration);
  });
  return batch;
}

}  // namespace pgreuse
