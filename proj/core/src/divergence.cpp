#include "pgreuse/divergence.hpp"

#include <cmath>

namespace pgreuse {

namespace {
constexpr double kMaxLogProduct = 700.0;

double mean_step_product(const std::vector<Trajectory>& trajs, double alpha,
                         const std::function<double(const Trajectory&, int)>& state_log_factor) {
  if (trajs.empty()) throw Fault("step_product_dalpha: no trajectories");
  if (alpha <= 1.0) throw Fault("step_product_dalpha: alpha must exceed 1");
  double acc = 0.0;
  for (const auto& traj : trajs) {
    double log_prod = 0.0;
    for (int t = 0; t < traj.length(); ++t) log_prod += state_log_factor(traj, t);
    if (log_prod > kMaxLogProduct)
      throw Fault("step_product_dalpha: log product overflow, exponent " +
                  std::to_string(log_prod));
    acc += std::exp(log_prod);
  }
  return acc / static_cast<double>(trajs.size());
}
}  // namespace

double gaussian_state_dalpha(const Vec& mu1, const Vec& mu2, double sigma2, double alpha) {
  if (sigma2 <= 0.0) throw Fault("gaussian_state_dalpha: sigma2 must be positive");
  if (alpha <= 1.0) throw Fault("gaussian_state_dalpha: alpha must exceed 1");
  return std::exp(alpha * (alpha - 1.0) * (mu1 - mu2).squaredNorm() / (2.0 * sigma2));
}

DivergenceEstimate step_product_dalpha(const LinearGaussianPolicy& target,
                                       const LinearGaussianPolicy& behavior,
                                       const std::vector<Trajectory>& behavior_trajs,
                                       double alpha) {
  if (target.sigma2() != behavior.sigma2())
    throw Fault("step_product_dalpha: policies must share sigma2");
  const double scale = alpha * (alpha - 1.0) / (2.0 * target.sigma2());
  const double d = mean_step_product(
      behavior_trajs, alpha, [&](const Trajectory& traj, int t) {
        const Vec& s = traj.states[t];
        return scale * (target.mean_action(s) - behavior.mean_action(s)).squaredNorm();
      });
  return {d, alpha, DivergenceMethod::StepProduct,
          static_cast<long>(behavior_trajs.size()), d < 1.0};
}

DivergenceEstimate step_product_dalpha_cached(const LinearGaussianPolicy& target,
                                              const std::vector<Trajectory>& behavior_trajs,
                                              double alpha) {
  const double scale = alpha * (alpha - 1.0) / (2.0 * target.sigma2());
  const double d = mean_step_product(
      behavior_trajs, alpha, [&](const Trajectory& traj, int t) {
        if (traj.behavior_means.size() != traj.rewards.size())
          throw Fault("step_product_dalpha_cached: trajectory lacks cached behavior means");
        return scale *
               (target.mean_action(traj.states[t]) - traj.behavior_means[t]).squaredNorm();
      });
  return {d, alpha, DivergenceMethod::StepProduct,
          static_cast<long>(behavior_trajs.size()), d < 1.0};
}

DivergenceEstimate naive_is_dalpha(const Policy& target,
                                   const std::vector<Trajectory>& behavior_trajs,
                                   double alpha) {
  if (behavior_trajs.empty()) throw Fault("naive_is_dalpha: no trajectories");
  if (alpha <= 1.0) throw Fault("naive_is_dalpha: alpha must exceed 1");
  double acc = 0.0;
  for (const auto& traj : behavior_trajs) {
    const double lr = alpha * traj_logratio(target, traj);
    if (lr > kMaxLogProduct)
      throw Fault("naive_is_dalpha: weight overflow, exponent " + std::to_string(lr));
    acc += std::exp(lr);
  }
  const double d = acc / static_cast<double>(behavior_trajs.size());
  return {d, alpha, DivergenceMethod::NaiveIs, static_cast<long>(behavior_trajs.size()),
          d < 1.0};
}

double chi2_hat(const LinearGaussianPolicy& target, const LinearGaussianPolicy& behavior,
                const std::vector<Trajectory>& behavior_trajs) {
  return std::max(step_product_dalpha(target, behavior, behavior_trajs, 2.0).d_alpha_hat - 1.0,
                  0.0);
}

double chi2_hat_cached(const LinearGaussianPolicy& target,
                       const std::vector<Trajectory>& behavior_trajs) {
  return std::max(step_product_dalpha_cached(target, behavior_trajs, 2.0).d_alpha_hat - 1.0,
                  0.0);
}

}  // namespace pgreuse
