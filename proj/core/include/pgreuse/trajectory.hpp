#ifndef PGREUSE_TRAJECTORY_HPP
#define PGREUSE_TRAJECTORY_HPP

#include <vector>

#include "pgreuse/common.hpp"

namespace pgreuse {

/// One episode. All per-step sequences have equal length T >= 1; episodes
/// may terminate before the environment horizon, in which case T is the
/// realized length. Log-densities of the acting (behavioral) policy are
/// cached per step at collection time so that importance-weight ratios
/// never need the behavioral policy again. For Gaussian policies the
/// per-step action means are cached as well; the divergence estimator works
/// off them, so old parameter vectors never have to be retained.
struct Trajectory {
  std::vector<Vec> states;
  std::vector<Vec> actions;
  std::vector<double> rewards;
  std::vector<double> behavior_logliks;
  std::vector<Vec> behavior_means;  // empty for non-Gaussian policies
  int behavior_id = 0;              // iteration index of the generating policy

  int length() const { return static_cast<int>(rewards.size()); }

  /// Sum of cached per-step behavioral log-densities, log p_b(tau) up to
  /// policy-independent dynamics terms.
  double behavior_logdensity() const {
    double s = 0.0;
    for (double v : behavior_logliks) s += v;
    return s;
  }
};

/// Static description of an environment.
struct EnvironmentSpec {
  int state_dim = 0;
  int action_dim = 0;
  int horizon = 0;
  double gamma = 1.0;   // gamma = 1 is allowed only for finite horizons
  double reward_bound = 0.0;
};

/// R(tau) = sum_t gamma^(t-1) r_t over the realized horizon.
inline double discounted_return(const Trajectory& traj, double gamma) {
  double acc = 0.0;
  double g = 1.0;
  for (double r : traj.rewards) {
    acc += g * r;
    g *= gamma;
  }
  return acc;
}

inline double undiscounted_return(const Trajectory& traj) {
  return discounted_return(traj, 1.0);
}

}  // namespace pgreuse

#endif  // PGREUSE_TRAJECTORY_HPP
