#ifndef PGREUSE_BIAS_LAB_HPP
#define PGREUSE_BIAS_LAB_HPP

#include <string>

#include "pgreuse/common.hpp"

namespace pgreuse {

/// Monte-Carlo probes for the estimator biases that sequential reuse
/// introduces, on the smallest instance where they can appear: a 1-d
/// Gaussian bandit, two iterations, one trajectory each, and a single
/// gradient-ascent update between them.
///
/// MiwDepTarget   — constant-coefficient MIW evaluated at the updated
///                  (history-dependent) parameter; biased in general.
/// MiwIndepTarget — same estimator at a fixed independent target; unbiased.
/// BhIndepTarget  — balance heuristic at a fixed independent target; biased
///                  because its coefficients couple trajectories to future
///                  parameters.
enum class BiasKind { MiwDepTarget, MiwIndepTarget, BhIndepTarget };

enum class RewardMap { Linear, Quadratic };

enum class BiasVerdict { BiasDetected, ConsistentWithZero };

std::string to_string(BiasKind kind);
std::string to_string(RewardMap map);
std::string to_string(BiasVerdict verdict);

struct BiasExperiment {
  BiasKind kind = BiasKind::MiwDepTarget;
  double theta1 = 0.0;
  double sigma2 = 0.5;
  double zeta = 1.0;          // gradient ascent step between the two iterations
  double target = 0.3;        // independent target (Indep kinds only)
  RewardMap reward = RewardMap::Quadratic;
  long replications = 1000000;
  std::uint64_t seed = 1;
};

struct BiasReport {
  double bias = 0.0;  // Monte-Carlo mean of (estimate - true gradient at target)
  double se = 0.0;
  double z = 0.0;
  BiasVerdict verdict = BiasVerdict::ConsistentWithZero;
  long discarded = 0;
  // The on-policy addendum of the history-dependent MIW estimator is
  // unbiased on its own; tracked separately as a self-check.
  double onpolicy_bias = 0.0;
  double onpolicy_se = 0.0;
  double onpolicy_z = 0.0;
};

/// Closed-form bandit gradient: d/dtheta E_{a~N(theta,sigma2)}[R(a)].
/// Linear R(a) = a gives 1; quadratic R(a) = a^2 gives 2*theta.
double analytic_bandit_gradient(double theta, double sigma2, RewardMap reward);

/// Run the Monte-Carlo experiment. Bias is declared when |z| > 4.
/// Replications with non-finite weights are discarded and counted; more
/// than 1% discards is a fault.
BiasReport run_bias_experiment(const BiasExperiment& exp);

}  // namespace pgreuse

#endif  // PGREUSE_BIAS_LAB_HPP
