#ifndef PGREUSE_FINITE_MDP_HPP
#define PGREUSE_FINITE_MDP_HPP

#include <vector>

#include "pgreuse/env.hpp"
#include "pgreuse/policy.hpp"

namespace pgreuse {

/// A small enumerable MDP. States and actions are indices; transition rows
/// and the initial distribution must each sum to 1 within 1e-12. Used as an
/// exact-gradient oracle for unbiasedness checks, and as an Environment
/// (states travel as 1-d vectors holding the index).
struct FiniteMdp {
  int n_states = 0;
  int n_actions = 0;
  // transition[s][a][s'] and reward[s][a]
  std::vector<std::vector<std::vector<double>>> transition;
  std::vector<std::vector<double>> reward;
  std::vector<double> initial;
  int horizon = 1;
  double gamma = 1.0;

  void validate() const;
  double reward_bound() const;
};

/// Softmax policy over tabular logits, one logit per (state, action),
/// flattened row-major as state*n_actions + action.
class TabularSoftmaxPolicy final : public Policy {
 public:
  TabularSoftmaxPolicy(const Vec& logits, int n_states, int n_actions);

  int state_dim() const override { return 1; }
  int action_dim() const override { return 1; }
  int param_dim() const override { return static_cast<int>(logits_.size()); }
  const Vec& params() const override { return logits_; }

  Vec sample_action(const Vec& state, RngStream& rng) const override;
  double step_logdensity(const Vec& state, const Vec& action) const override;
  Vec score(const Vec& state, const Vec& action) const override;
  std::unique_ptr<Policy> with_params(const Vec& params) const override;

  std::vector<double> action_probs(int state) const;

 private:
  Vec logits_;
  int n_states_;
  int n_actions_;
};

class FiniteMdpEnv final : public Environment {
 public:
  explicit FiniteMdpEnv(FiniteMdp mdp);
  const EnvironmentSpec& spec() const override { return spec_; }
  const FiniteMdp& mdp() const { return mdp_; }
  Vec reset(RngStream& rng) const override;
  StepResult step(const Vec& state, const Vec& action, RngStream& rng) const override;

 private:
  FiniteMdp mdp_;
  EnvironmentSpec spec_;
};

/// Exact policy gradient by brute-force enumeration of every length-T
/// trajectory: sum_tau p_theta(tau) (sum_t score_t) R(tau). Refuses when the
/// trajectory count (n_states * n_actions)^T exceeds `budget`.
Vec exact_gradient(const FiniteMdp& mdp, const TabularSoftmaxPolicy& policy, double gamma,
                   long budget = 1000000);

/// Total probability mass over all enumerated trajectories (should be 1).
double enumerate_total_probability(const FiniteMdp& mdp, const TabularSoftmaxPolicy& policy,
                                   long budget = 1000000);

}  // namespace pgreuse

#endif  // PGREUSE_FINITE_MDP_HPP
