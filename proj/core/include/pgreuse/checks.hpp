#ifndef PGREUSE_CHECKS_HPP
#define PGREUSE_CHECKS_HPP

#include <string>
#include <vector>

#include "pgreuse/finite_mdp.hpp"

namespace pgreuse {

/// The 2-state/2-action fixture (horizon 3, gamma 0.9) used for
/// unbiasedness checks against the enumeration oracle.
FiniteMdp oracle_mdp();
Vec oracle_behavior_logits();
Vec oracle_target_logits();

struct ZCheck {
  std::string name;
  double max_abs_z = 0.0;  // worst coordinate-wise |sample mean - exact| / SE
  bool pass = false;       // max_abs_z <= 3
};

/// Sample means of REINFORCE, GPOMDP (on-policy), SIW and constant-MIW
/// (history-independent target) over `n_rollouts` trajectories, each checked
/// coordinate-wise against the enumeration oracle within 3 standard errors.
std::vector<ZCheck> run_oracle_suite(long n_rollouts, std::uint64_t seed);

struct DivergenceCheck {
  std::string name;
  double reference = 0.0;
  double estimate = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

/// Cross-checks on a one-step Gaussian bandit: the naive importance-sampling
/// estimate against the closed form within 5% at mean shifts
/// {0.1, 0.25, 0.5} sigma, and exactness of the step-product estimator on
/// one-step problems.
std::vector<DivergenceCheck> run_divergence_checks(long n_samples, std::uint64_t seed);

}  // namespace pgreuse

#endif  // PGREUSE_CHECKS_HPP
