#ifndef PGREUSE_ESTIMATORS_HPP
#define PGREUSE_ESTIMATORS_HPP

#include <string>
#include <vector>

#include "pgreuse/buffer.hpp"
#include "pgreuse/coefficients.hpp"
#include "pgreuse/policy.hpp"

namespace pgreuse {

/// Single-trajectory estimator used inside the batch and multi-behavioral
/// estimators. Gpomdp is the causal variant and the default everywhere.
enum class InnerEstimator { Reinforce, Gpomdp };

enum class EstimatorTag { Reinforce, Gpomdp, Siw, Miw, Bh, Mpm, PgpeMpm };

std::string to_string(EstimatorTag tag);

struct GradientEstimate {
  Vec vector;
  long n_trajectories_used = 0;
  EstimatorTag tag = EstimatorTag::Gpomdp;
};

/// (sum_t score_t) * R(tau).
Vec reinforce_grad(const Policy& policy, const Trajectory& traj, double gamma);

/// sum_t (sum_{l<=t} score_l) * gamma^(t-1) r_t.
Vec gpomdp_grad(const Policy& policy, const Trajectory& traj, double gamma);

Vec inner_grad(const Policy& policy, const Trajectory& traj, double gamma,
               InnerEstimator inner);

/// Plain on-policy batch mean of the inner estimator.
GradientEstimate onpolicy_estimate(const Policy& policy,
                                   const std::vector<Trajectory>& batch, double gamma,
                                   InnerEstimator inner = InnerEstimator::Gpomdp);

/// Single importance weighting: (1/N) sum_j (p_target/p_b)(tau_j) g(tau_j)
/// over one behavioral batch. Faults if any weight would overflow.
GradientEstimate siw_estimate(const Policy& target, const std::vector<Trajectory>& batch,
                              double gamma, InnerEstimator inner = InnerEstimator::Gpomdp);

/// Multiple importance weighting with constant coefficients beta_i = 1/window:
/// sum_i (1/w)(1/N_i) sum_j IW_ij g(tau_ij). Faults on weight overflow.
GradientEstimate miw_constant_estimate(const Policy& target, const WindowBuffer& window,
                                       double gamma,
                                       InnerEstimator inner = InnerEstimator::Gpomdp);

/// Balance heuristic: (1/M) sum_ij p_target(tau_ij) / (sum_l (N_l/M) p_l(tau_ij))
/// * g(tau_ij). Requires a RetainPolicies window.
GradientEstimate bh_estimate(const Policy& target, WindowBuffer& window, double gamma,
                             InnerEstimator inner = InnerEstimator::Gpomdp);

/// Power-mean-corrected multiple importance weighting:
///   sum_i (1/N_i) sum_j alpha_i * g(tau_ij)
///                 / ((1 - lambda_i) p_i(tau_ij)/p_target(tau_ij) + lambda_i).
/// The corrective weight is the lambda-weighted harmonic mean of the vanilla
/// importance weight and 1, so each summand's scalar weight lies in
/// (0, alpha_i/lambda_i]. Ratios are handled in log space; the on-policy
/// term's weight is exactly alpha_i.
GradientEstimate mpm_estimate(const Policy& target, const WindowBuffer& window,
                              const MpmCoefficients& coeffs, double gamma,
                              InnerEstimator inner = InnerEstimator::Gpomdp);

/// One window iterate of the parameter-based variant: parameter samples
/// drawn from the behavioral hyperpolicy, the return of one rollout each,
/// and the cached behavioral hyper log-density per sample.
struct HyperWindowEntry {
  int iterate = 0;
  std::vector<Vec> theta_samples;
  std::vector<double> returns;
  std::vector<double> behavior_logliks;
  Vec hyper_mean;  // behavioral hyperpolicy mean, kept for divergence estimates
};

/// Parameter-based power-mean estimator. The importance weight reduces to
/// the hyperpolicy density ratio; the inner estimator is
/// score(hyper, theta) * R(tau).
GradientEstimate pgpe_mpm_estimate(const GaussianHyperpolicy& target,
                                   const std::vector<HyperWindowEntry>& window,
                                   const MpmCoefficients& coeffs);

/// alpha / ((1 - lambda) e^logratio + lambda), computed without overflow for
/// any logratio (logratio = behavioral minus target trajectory log-density).
double power_mean_weight(double alpha, double lambda, double logratio);

}  // namespace pgreuse

#endif  // PGREUSE_ESTIMATORS_HPP
