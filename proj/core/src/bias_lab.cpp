#include "pgreuse/bias_lab.hpp"

#include <cmath>

namespace pgreuse {

std::string to_string(BiasKind kind) {
  switch (kind) {
    case BiasKind::MiwDepTarget: return "MIW_DEP_TARGET";
    case BiasKind::MiwIndepTarget: return "MIW_INDEP_TARGET";
    case BiasKind::BhIndepTarget: return "BH_INDEP_TARGET";
  }
  return "?";
}

std::string to_string(RewardMap map) {
  return map == RewardMap::Linear ? "LINEAR" : "QUADRATIC";
}

std::string to_string(BiasVerdict verdict) {
  return verdict == BiasVerdict::BiasDetected ? "BIAS_DETECTED" : "CONSISTENT_WITH_ZERO";
}

double analytic_bandit_gradient(double theta, double sigma2, RewardMap reward) {
  (void)sigma2;
  switch (reward) {
    case RewardMap::Linear: return 1.0;      // E[a] = theta
    case RewardMap::Quadratic: return 2.0 * theta;  // E[a^2] = theta^2 + sigma2
  }
  throw Fault("analytic_bandit_gradient: unknown reward map");
}

namespace {

double reward_of(double a, RewardMap map) {
  return map == RewardMap::Linear ? a : a * a;
}

// Gaussian log-density ratio log N(a; p, s2) - log N(a; q, s2).
double logratio(double a, double p, double q, double s2) {
  const double dp = a - p;
  const double dq = a - q;
  return (dq * dq - dp * dp) / (2.0 * s2);
}

struct Welford {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double se() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0; }
};

}  // namespace

BiasReport run_bias_experiment(const BiasExperiment& exp) {
  if (exp.replications < 10000)
    throw Fault("run_bias_experiment: need at least 1e4 replications");
  if (exp.sigma2 <= 0.0) throw Fault("run_bias_experiment: sigma2 must be positive");

  const double s2 = exp.sigma2;
  const double sd = std::sqrt(s2);
  Welford stats;
  Welford onpolicy_stats;
  long discarded = 0;

  for (long rep = 0; rep < exp.replications; ++rep) {
    RngStream rng = RngStream::derive(exp.seed, 0x62696173ULL, rep);
    const double theta1 = exp.theta1;
    const double a1 = theta1 + sd * rng.normal();
    // Single-sample gradient ascent update: score times reward.
    const double g1 = (a1 - theta1) / s2 * reward_of(a1, exp.reward);
    const double theta2 = theta1 + exp.zeta * g1;
    const double a2 = theta2 + sd * rng.normal();

    const double target =
        exp.kind == BiasKind::MiwDepTarget ? theta2 : exp.target;
    const double truth = analytic_bandit_gradient(target, s2, exp.reward);
    const double g_t1 = (a1 - target) / s2 * reward_of(a1, exp.reward);
    const double g_t2 = (a2 - target) / s2 * reward_of(a2, exp.reward);

    double estimate = 0.0;
    switch (exp.kind) {
      case BiasKind::MiwDepTarget: {
        const double w1 = std::exp(logratio(a1, target, theta1, s2));
        estimate = 0.5 * w1 * g_t1 + 0.5 * g_t2;
        break;
      }
      case BiasKind::MiwIndepTarget: {
        const double w1 = std::exp(logratio(a1, target, theta1, s2));
        const double w2 = std::exp(logratio(a2, target, theta2, s2));
        estimate = 0.5 * w1 * g_t1 + 0.5 * w2 * g_t2;
        break;
      }
      case BiasKind::BhIndepTarget: {
        // Balance heuristic with N1 = N2 = 1, M = 2: the mixture density
        // (p1 + p2)/2 sits in the denominator.
        const double l_t1 = -0.5 * (a1 - target) * (a1 - target) / s2;
        const double l_11 = -0.5 * (a1 - theta1) * (a1 - theta1) / s2;
        const double l_21 = -0.5 * (a1 - theta2) * (a1 - theta2) / s2;
        const double l_t2 = -0.5 * (a2 - target) * (a2 - target) / s2;
        const double l_12 = -0.5 * (a2 - theta1) * (a2 - theta1) / s2;
        const double l_22 = -0.5 * (a2 - theta2) * (a2 - theta2) / s2;
        const double mix1 = 0.5 * (std::exp(l_11) + std::exp(l_21));
        const double mix2 = 0.5 * (std::exp(l_12) + std::exp(l_22));
        estimate = 0.5 * (std::exp(l_t1) / mix1 * g_t1 + std::exp(l_t2) / mix2 * g_t2);
        break;
      }
    }

    if (!std::isfinite(estimate)) {
      ++discarded;
      continue;
    }
    stats.add(estimate - truth);
    if (exp.kind == BiasKind::MiwDepTarget) onpolicy_stats.add(g_t2 - truth);
  }

  if (discarded * 100 > exp.replications)
    throw Fault("run_bias_experiment: more than 1% of replications discarded (" +
                std::to_string(discarded) + ")");

  BiasReport report;
  report.discarded = discarded;
  report.bias = stats.mean;
  report.se = stats.se();
  report.z = report.se > 0.0 ? report.bias / report.se : 0.0;
  report.verdict = std::abs(report.z) > 4.0 ? BiasVerdict::BiasDetected
                                            : BiasVerdict::ConsistentWithZero;
  if (exp.kind == BiasKind::MiwDepTarget) {
    report.onpolicy_bias = onpolicy_stats.mean;
    report.onpolicy_se = onpolicy_stats.se();
    report.onpolicy_z =
        report.onpolicy_se > 0.0 ? report.onpolicy_bias / report.onpolicy_se : 0.0;
  }
  return report;
}

}  // namespace pgreuse
