#include "pgreuse/policy.hpp"

#include <cmath>

namespace pgreuse {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::Map<const Eigen::MatrixXd> as_matrix(const Vec& theta_flat, int state_dim,
                                            int action_dim) {
  // Row-major over (state_dim, action_dim): entry (s, a) sits at s*action_dim + a.
  // Eigen maps are column-major, so map the transpose shape.
  return {theta_flat.data(), action_dim, state_dim};
}

Vec linear_mean(const Vec& theta_flat, int ds, int da, const Vec& state) {
  return as_matrix(theta_flat, ds, da) * state;
}
}  // namespace

LinearGaussianPolicy::LinearGaussianPolicy(const Vec& theta_flat, int state_dim,
                                           int action_dim, double sigma2)
    : theta_(theta_flat), state_dim_(state_dim), action_dim_(action_dim), sigma2_(sigma2) {
  if (sigma2 <= 0.0) throw Fault("LinearGaussianPolicy: sigma2 must be positive");
  if (theta_flat.size() != static_cast<long>(state_dim) * action_dim)
    throw Fault("LinearGaussianPolicy: parameter size does not match d_S*d_A");
  if (!theta_flat.allFinite()) throw Fault("LinearGaussianPolicy: non-finite parameters");
}

Vec LinearGaussianPolicy::mean_action(const Vec& state) const {
  return linear_mean(theta_, state_dim_, action_dim_, state);
}

Vec LinearGaussianPolicy::sample_action(const Vec& state, RngStream& rng) const {
  Vec a = mean_action(state);
  const double sd = std::sqrt(sigma2_);
  for (int i = 0; i < a.size(); ++i) a[i] += sd * rng.normal();
  return a;
}

double LinearGaussianPolicy::step_logdensity(const Vec& state, const Vec& action) const {
  const Vec mu = mean_action(state);
  const double sq = (action - mu).squaredNorm();
  const int d = action_dim_;
  return -0.5 * (d * (kLog2Pi + std::log(sigma2_)) + sq / sigma2_);
}

Vec LinearGaussianPolicy::score(const Vec& state, const Vec& action) const {
  const Vec resid = action - mean_action(state);  // d_A
  Vec g(theta_.size());
  // d/dtheta(s,a) = state[s] * resid[a] / sigma2 with row-major layout.
  for (int s = 0; s < state_dim_; ++s)
    for (int a = 0; a < action_dim_; ++a)
      g[s * action_dim_ + a] = state[s] * resid[a] / sigma2_;
  return g;
}

std::unique_ptr<Policy> LinearGaussianPolicy::with_params(const Vec& params) const {
  return std::make_unique<LinearGaussianPolicy>(params, state_dim_, action_dim_, sigma2_);
}

DeterministicLinearPolicy::DeterministicLinearPolicy(const Vec& theta_flat, int state_dim,
                                                     int action_dim)
    : theta_(theta_flat), state_dim_(state_dim), action_dim_(action_dim) {
  if (theta_flat.size() != static_cast<long>(state_dim) * action_dim)
    throw Fault("DeterministicLinearPolicy: parameter size does not match d_S*d_A");
}

Vec DeterministicLinearPolicy::mean_action(const Vec& state) const {
  return linear_mean(theta_, state_dim_, action_dim_, state);
}

Vec DeterministicLinearPolicy::sample_action(const Vec& state, RngStream&) const {
  return mean_action(state);
}

double DeterministicLinearPolicy::step_logdensity(const Vec&, const Vec&) const {
  return 0.0;
}

Vec DeterministicLinearPolicy::score(const Vec&, const Vec&) const {
  throw Fault("DeterministicLinearPolicy has no score; use the hyperpolicy score");
}

std::unique_ptr<Policy> DeterministicLinearPolicy::with_params(const Vec& params) const {
  return std::make_unique<DeterministicLinearPolicy>(params, state_dim_, action_dim_);
}

GaussianHyperpolicy::GaussianHyperpolicy(const Vec& mean, double sigma2)
    : mean_(mean), sigma2_(sigma2) {
  if (sigma2 <= 0.0) throw Fault("GaussianHyperpolicy: sigma2 must be positive");
}

Vec GaussianHyperpolicy::sample(RngStream& rng) const {
  return mean_ + std::sqrt(sigma2_) * rng.normal_vec(dim());
}

double GaussianHyperpolicy::logdensity(const Vec& theta) const {
  const double sq = (theta - mean_).squaredNorm();
  return -0.5 * (dim() * (kLog2Pi + std::log(sigma2_)) + sq / sigma2_);
}

Vec GaussianHyperpolicy::score(const Vec& theta) const {
  return (theta - mean_) / sigma2_;
}

double traj_loglik(const Policy& policy, const Trajectory& traj) {
  double acc = 0.0;
  for (int t = 0; t < traj.length(); ++t)
    acc += policy.step_logdensity(traj.states[t], traj.actions[t]);
  return acc;
}

double traj_logratio(const Policy& target, const Trajectory& traj) {
  if (traj.behavior_logliks.size() != traj.rewards.size())
    throw Fault("traj_logratio: trajectory carries no behavioral log-densities");
  double acc = 0.0;
  for (int t = 0; t < traj.length(); ++t)
    acc += target.step_logdensity(traj.states[t], traj.actions[t]) - traj.behavior_logliks[t];
  if (!std::isfinite(acc)) throw Fault("traj_logratio: non-finite accumulation");
  return acc;
}

}  // namespace pgreuse
