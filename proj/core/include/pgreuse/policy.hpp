#ifndef PGREUSE_POLICY_HPP
#define PGREUSE_POLICY_HPP

#include <memory>

#include "pgreuse/common.hpp"
#include "pgreuse/trajectory.hpp"

namespace pgreuse {

/// A parametric stochastic policy. Policies are immutable values; cloning
/// with different parameters produces a new object.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int state_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual int param_dim() const = 0;
  virtual const Vec& params() const = 0;

  virtual Vec sample_action(const Vec& state, RngStream& rng) const = 0;
  virtual double step_logdensity(const Vec& state, const Vec& action) const = 0;
  /// d/dtheta log pi_theta(action|state), laid out like params().
  virtual Vec score(const Vec& state, const Vec& action) const = 0;

  /// Mean action for Gaussian policies; empty vector otherwise.
  virtual Vec mean_action(const Vec& /*state*/) const { return Vec(); }

  virtual std::unique_ptr<Policy> with_params(const Vec& params) const = 0;
};

/// Gaussian policy with a state-linear mean: a ~ N(theta^T s, sigma2 I).
/// Parameters are the d_S x d_A matrix theta flattened row-major over
/// (state_dim, action_dim); every consumer relies on this layout.
class LinearGaussianPolicy final : public Policy {
 public:
  LinearGaussianPolicy(const Vec& theta_flat, int state_dim, int action_dim, double sigma2);

  int state_dim() const override { return state_dim_; }
  int action_dim() const override { return action_dim_; }
  int param_dim() const override { return static_cast<int>(theta_.size()); }
  const Vec& params() const override { return theta_; }
  double sigma2() const { return sigma2_; }

  Vec sample_action(const Vec& state, RngStream& rng) const override;
  double step_logdensity(const Vec& state, const Vec& action) const override;
  Vec score(const Vec& state, const Vec& action) const override;
  Vec mean_action(const Vec& state) const override;

  std::unique_ptr<Policy> with_params(const Vec& params) const override;

 private:
  Vec theta_;
  int state_dim_;
  int action_dim_;
  double sigma2_;
};

/// Deterministic linear controller a = theta^T s, the inner policy of
/// parameter-based exploration. step_logdensity is 0 by convention; the
/// importance weights of the parameter-based estimators only involve
/// hyperpolicy densities, which cancel the (deterministic) action terms.
class DeterministicLinearPolicy final : public Policy {
 public:
  DeterministicLinearPolicy(const Vec& theta_flat, int state_dim, int action_dim);

  int state_dim() const override { return state_dim_; }
  int action_dim() const override { return action_dim_; }
  int param_dim() const override { return static_cast<int>(theta_.size()); }
  const Vec& params() const override { return theta_; }

  Vec sample_action(const Vec& state, RngStream& rng) const override;
  double step_logdensity(const Vec& state, const Vec& action) const override;
  Vec score(const Vec& state, const Vec& action) const override;
  Vec mean_action(const Vec& state) const override;

  std::unique_ptr<Policy> with_params(const Vec& params) const override;

 private:
  Vec theta_;
  int state_dim_;
  int action_dim_;
};

/// Isotropic Gaussian distribution over policy parameters, theta ~ N(mean, sigma2 I).
class GaussianHyperpolicy {
 public:
  GaussianHyperpolicy(const Vec& mean, double sigma2);

  const Vec& mean() const { return mean_; }
  double sigma2() const { return sigma2_; }
  int dim() const { return static_cast<int>(mean_.size()); }

  Vec sample(RngStream& rng) const;
  double logdensity(const Vec& theta) const;
  /// d/dxi log nu_xi(theta) = (theta - mean) / sigma2.
  Vec score(const Vec& theta) const;

  GaussianHyperpolicy with_mean(const Vec& mean) const { return {mean, sigma2_}; }

 private:
  Vec mean_;
  double sigma2_;
};

/// log p_target(tau) - log p_behavior(tau) using the cached behavioral
/// log-densities; dynamics terms cancel, so only policy factors appear.
/// exp() of the result is the vanilla importance weight.
double traj_logratio(const Policy& target, const Trajectory& traj);

/// Trajectory log-density of `policy` (policy factors only).
double traj_loglik(const Policy& policy, const Trajectory& traj);

}  // namespace pgreuse

#endif  // PGREUSE_POLICY_HPP
