#ifndef PGREUSE_ROLLOUT_HPP
#define PGREUSE_ROLLOUT_HPP

#include <functional>
#include <vector>

#include "pgreuse/env.hpp"
#include "pgreuse/policy.hpp"

namespace pgreuse {

/// Play one episode of `policy` in `env`, caching behavioral log-densities
/// (and, for Gaussian policies, action means) per step. The returned
/// trajectory is at most spec().horizon long and shorter on termination.
Trajectory rollout(const Environment& env, const Policy& policy, RngStream& rng,
                   int behavior_id = 0);

/// Collect `n` independent rollouts on streams derived from
/// (master, iteration, j). With `threads` > 1 the rollouts run concurrently;
/// the result is identical either way.
std::vector<Trajectory> collect_batch(const Environment& env, const Policy& policy, int n,
                                      std::uint64_t master, int iteration, int threads = 1);

/// Run fn(i) for i in [0, n) across `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace pgreuse

#endif  // PGREUSE_ROLLOUT_HPP
