#include "pgreuse/estimators.hpp"

#include <cmath>

namespace pgreuse {

namespace {
// Beyond this, exp() of a log importance weight overflows a double.
constexpr double kMaxLogWeight = 700.0;
}

std::string to_string(EstimatorTag tag) {
  switch (tag) {
    case EstimatorTag::Reinforce: return "REINFORCE";
    case EstimatorTag::Gpomdp: return "GPOMDP";
    case EstimatorTag::Siw: return "SIW";
    case EstimatorTag::Miw: return "MIW";
    case EstimatorTag::Bh: return "BH";
    case EstimatorTag::Mpm: return "MPM";
    case EstimatorTag::PgpeMpm: return "PGPE-MPM";
  }
  return "?";
}

Vec reinforce_grad(const Policy& policy, const Trajectory& traj, double gamma) {
  if (traj.length() < 1) throw Fault("reinforce_grad: empty trajectory");
  Vec score_sum = Vec::Zero(policy.param_dim());
  for (int t = 0; t < traj.length(); ++t)
    score_sum += policy.score(traj.states[t], traj.actions[t]);
  return score_sum * discounted_return(traj, gamma);
}

Vec gpomdp_grad(const Policy& policy, const Trajectory& traj, double gamma) {
  if (traj.length() < 1) throw Fault("gpomdp_grad: empty trajectory");
  Vec prefix = Vec::Zero(policy.param_dim());
  Vec grad = Vec::Zero(policy.param_dim());
  double disc = 1.0;
  for (int t = 0; t < traj.length(); ++t) {
    prefix += policy.score(traj.states[t], traj.actions[t]);
    grad += prefix * (disc * traj.rewards[t]);
    disc *= gamma;
  }
  return grad;
}

Vec inner_grad(const Policy& policy, const Trajectory& traj, double gamma,
               InnerEstimator inner) {
  return inner == InnerEstimator::Reinforce ? reinforce_grad(policy, traj, gamma)
                                            : gpomdp_grad(policy, traj, gamma);
}

GradientEstimate onpolicy_estimate(const Policy& policy,
                                   const std::vector<Trajectory>& batch, double gamma,
                                   InnerEstimator inner) {
  if (batch.empty()) throw Fault("onpolicy_estimate: empty batch");
  Vec acc = Vec::Zero(policy.param_dim());
  for (const auto& traj : batch) acc += inner_grad(policy, traj, gamma, inner);
  return {acc / static_cast<double>(batch.size()), static_cast<long>(batch.size()),
          inner == InnerEstimator::Reinforce ? EstimatorTag::Reinforce
                                             : EstimatorTag::Gpomdp};
}

GradientEstimate siw_estimate(const Policy& target, const std::vector<Trajectory>& batch,
                              double gamma, InnerEstimator inner) {
  if (batch.empty()) throw Fault("siw_estimate: empty batch");
  Vec acc = Vec::Zero(target.param_dim());
  double max_logratio = -std::numeric_limits<double>::infinity();
  for (const auto& traj : batch) {
    const double lr = traj_logratio(target, traj);
    max_logratio = std::max(max_logratio, lr);
    if (lr > kMaxLogWeight)
      throw Fault("siw_estimate: importance weight overflow, max logratio " +
                  std::to_string(max_logratio));
    acc += std::exp(lr) * inner_grad(target, traj, gamma, inner);
  }
  return {acc / static_cast<double>(batch.size()), static_cast<long>(batch.size()),
          EstimatorTag::Siw};
}

GradientEstimate miw_constant_estimate(const Policy& target, const WindowBuffer& window,
                                       double gamma, InnerEstimator inner) {
  if (window.window_len() == 0) throw Fault("miw_constant_estimate: empty window");
  const LoglikTable target_logliks = window.target_logliks(target);
  const double beta = 1.0 / window.window_len();

  Vec acc = Vec::Zero(target.param_dim());
  double max_logratio = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < window.entries().size(); ++i) {
    const auto& batch = window.entries()[i].batch;
    Vec group = Vec::Zero(target.param_dim());
    for (size_t j = 0; j < batch.size(); ++j) {
      const double lr = target_logliks[i][j] - batch[j].behavior_logdensity();
      max_logratio = std::max(max_logratio, lr);
      if (lr > kMaxLogWeight)
        throw Fault("miw_constant_estimate: importance weight overflow, max logratio " +
                    std::to_string(max_logratio));
      group += std::exp(lr) * inner_grad(target, batch[j], gamma, inner);
    }
    acc += (beta / static_cast<double>(batch.size())) * group;
  }
  return {acc, window.total_trajectories(), EstimatorTag::Miw};
}

GradientEstimate bh_estimate(const Policy& target, WindowBuffer& window, double gamma,
                             InnerEstimator inner) {
  if (window.window_len() == 0) throw Fault("bh_estimate: empty window");
  const LoglikTable target_logliks = window.target_logliks(target);
  const LoglikTable mixture = window.bh_mixture_logliks();
  const double m_total = static_cast<double>(window.total_trajectories());

  Vec acc = Vec::Zero(target.param_dim());
  for (size_t i = 0; i < window.entries().size(); ++i) {
    const auto& batch = window.entries()[i].batch;
    for (size_t j = 0; j < batch.size(); ++j) {
      const double log_w = target_logliks[i][j] - mixture[i][j];
      const double w = std::exp(log_w);
      if (!std::isfinite(w))
        throw Fault("bh_estimate: non-finite weight, log " + std::to_string(log_w));
      acc += w * inner_grad(target, batch[j], gamma, inner);
    }
  }
  return {acc / m_total, window.total_trajectories(), EstimatorTag::Bh};
}

double power_mean_weight(double alpha, double lambda, double logratio) {
  if (lambda < 0.0 || lambda > 1.0)
    throw Fault("power_mean_weight: lambda must lie in [0,1]");
  if (logratio == 0.0) return alpha;  // on-policy term, weight exactly alpha
  double w;
  if (logratio > 0.0) {
    // Factor out e^logratio so nothing overflows when the behavioral
    // density dominates.
    const double inv = std::exp(-logratio);
    w = alpha * inv / ((1.0 - lambda) + lambda * inv);
  } else {
    w = alpha / ((1.0 - lambda) * std::exp(logratio) + lambda);
  }
  if (!std::isfinite(w))
    throw Fault("power_mean_weight: non-finite weight (lambda=" + std::to_string(lambda) +
                ", logratio=" + std::to_string(logratio) + ")");
  return w;
}

GradientEstimate mpm_estimate(const Policy& target, const WindowBuffer& window,
                              const MpmCoefficients& coeffs, double gamma,
                              InnerEstimator inner) {
  if (window.window_len() == 0) throw Fault("mpm_estimate: empty window");
  if (coeffs.size() != window.window_len())
    throw Fault("mpm_estimate: coefficient count does not match window length");
  const LoglikTable target_logliks = window.target_logliks(target);

  Vec acc = Vec::Zero(target.param_dim());
  for (size_t i = 0; i < window.entries().size(); ++i) {
    const auto& batch = window.entries()[i].batch;
    Vec group = Vec::Zero(target.param_dim());
    for (size_t j = 0; j < batch.size(); ++j) {
      // logratio of the PM denominator: behavioral minus target density.
      const double lr = batch[j].behavior_logdensity() - target_logliks[i][j];
      const double w = power_mean_weight(coeffs.alpha[i], coeffs.lambda[i], lr);
      if (!std::isfinite(w))
        throw Fault("mpm_estimate: non-finite weight at window index " + std::to_string(i));
      group += w * inner_grad(target, batch[j], gamma, inner);
    }
    acc += group / static_cast<double>(batch.size());
  }
  return {acc, window.total_trajectories(), EstimatorTag::Mpm};
}

GradientEstimate pgpe_mpm_estimate(const GaussianHyperpolicy& target,
                                   const std::vector<HyperWindowEntry>& window,
                                   const MpmCoefficients& coeffs) {
  if (window.empty()) throw Fault("pgpe_mpm_estimate: empty window");
  if (coeffs.size() != static_cast<int>(window.size()))
    throw Fault("pgpe_mpm_estimate: coefficient count does not match window length");

  Vec acc = Vec::Zero(target.dim());
  long used = 0;
  for (size_t i = 0; i < window.size(); ++i) {
    const auto& e = window[i];
    if (e.theta_samples.size() != e.returns.size() ||
        e.theta_samples.size() != e.behavior_logliks.size())
      throw Fault("pgpe_mpm_estimate: ragged window entry");
    Vec group = Vec::Zero(target.dim());
    for (size_t j = 0; j < e.theta_samples.size(); ++j) {
      const double lr = e.behavior_logliks[j] - target.logdensity(e.theta_samples[j]);
      const double w = power_mean_weight(coeffs.alpha[i], coeffs.lambda[i], lr);
      if (!std::isfinite(w))
        throw Fault("pgpe_mpm_estimate: non-finite weight at window index " +
                    std::to_string(i));
      group += (w * e.returns[j]) * target.score(e.theta_samples[j]);
    }
    acc += group / static_cast<double>(e.theta_samples.size());
    used += static_cast<long>(e.theta_samples.size());
  }
  return {acc, used, EstimatorTag::PgpeMpm};
}

}  // namespace pgreuse
