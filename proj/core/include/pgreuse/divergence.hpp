#ifndef PGREUSE_DIVERGENCE_HPP
#define PGREUSE_DIVERGENCE_HPP

#include <vector>

#include "pgreuse/policy.hpp"

namespace pgreuse {

enum class DivergenceMethod { NaiveIs, StepProduct, ClosedFormState };

/// Estimate of the exponentiated alpha-Renyi divergence d_alpha between two
/// trajectory distributions. The step-product and closed-form estimates are
/// always >= 1; the naive importance-sampling estimate can dip below 1 at
/// small sample sizes, which is flagged rather than clamped.
struct DivergenceEstimate {
  double d_alpha_hat = 1.0;
  double alpha = 2.0;
  DivergenceMethod method = DivergenceMethod::StepProduct;
  long n_samples = 0;
  bool below_unity = false;
};

/// Closed form for two isotropic Gaussians sharing sigma2:
/// d_alpha = exp(alpha (alpha-1) |mu1 - mu2|^2 / (2 sigma2)).
double gaussian_state_dalpha(const Vec& mu1, const Vec& mu2, double sigma2, double alpha);

/// Trajectory-level d_alpha as the sample mean, over behavioral
/// trajectories, of per-state closed-form products:
/// (1/N) sum_j prod_t d_alpha(pi_target(.|s_t) || pi_b(.|s_t)).
/// Both policies must share sigma2. Products accumulate in log space and
/// fault if an exponent passes 700 (the weight would saturate a double; the
/// caller usually prefers dropping such an iterate).
DivergenceEstimate step_product_dalpha(const LinearGaussianPolicy& target,
                                       const LinearGaussianPolicy& behavior,
                                       const std::vector<Trajectory>& behavior_trajs,
                                       double alpha);

/// Same estimator, reading the behavioral per-step means cached on the
/// trajectories instead of re-scoring states under a stored policy.
DivergenceEstimate step_product_dalpha_cached(const LinearGaussianPolicy& target,
                                              const std::vector<Trajectory>& behavior_trajs,
                                              double alpha);

/// Naive importance-sampling estimate (1/N) sum_j (p_target/p_b)(tau_j)^alpha.
/// Accurate only at large N; kept for oracle cross-checks.
DivergenceEstimate naive_is_dalpha(const Policy& target,
                                   const std::vector<Trajectory>& behavior_trajs,
                                   double alpha);

/// Empirical chi-square divergence chi2(p_target || p_behavior) =
/// max(d_2 - 1, 0) via the step-product estimator. The target goes in the
/// numerator slot.
double chi2_hat(const LinearGaussianPolicy& target, const LinearGaussianPolicy& behavior,
                const std::vector<Trajectory>& behavior_trajs);

double chi2_hat_cached(const LinearGaussianPolicy& target,
                       const std::vector<Trajectory>& behavior_trajs);

}  // namespace pgreuse

#endif  // PGREUSE_DIVERGENCE_HPP
