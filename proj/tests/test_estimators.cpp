#include <doctest.h>

#include <cmath>

#include "pgreuse/estimators.hpp"
#include "test_fixtures.hpp"

using namespace pgreuse;
using namespace pgreuse::testing;

TEST_CASE("REINFORCE basics") {
  RngStream rng(1);
  LinearGaussianPolicy policy = random_policy(rng, 2, 1, 0.5);

  Trajectory traj = random_traj(rng, policy, 4);
  for (double& r : traj.rewards) r = 0.0;
  CHECK(reinforce_grad(policy, traj, 0.9).norm() == doctest::Approx(0.0));

  // One-step case: score times reward.
  Trajectory one = random_traj(rng, policy, 1);
  const Vec expect = policy.score(one.states[0], one.actions[0]) * one.rewards[0];
  CHECK((reinforce_grad(policy, one, 0.9) - expect).norm() == doctest::Approx(0.0));
  CHECK((gpomdp_grad(policy, one, 0.9) - expect).norm() == doctest::Approx(0.0));
}

TEST_CASE("GPOMDP causality") {
  RngStream rng(2);
  LinearGaussianPolicy policy = random_policy(rng, 2, 1, 0.5);
  Trajectory traj = random_traj(rng, policy, 3);
  traj.rewards = {0.7, 0.0, 0.0};
  // Only the first reward is nonzero, so only the first score contributes.
  const Vec expect = policy.score(traj.states[0], traj.actions[0]) * 0.7;
  CHECK((gpomdp_grad(policy, traj, 0.5) - expect).norm() <= 1e-15);
  // REINFORCE drags in the whole score sum instead.
  const Vec r = reinforce_grad(policy, traj, 0.5);
  CHECK((r - expect).norm() > 1e-6);
}

TEST_CASE("SIW with target equal to behavior is the on-policy mean") {
  RngStream rng(3);
  LinearGaussianPolicy policy = random_policy(rng, 3, 1, 0.4);
  const auto batch = random_batch(rng, policy, 8, 5);
  const GradientEstimate onp = onpolicy_estimate(policy, batch, 0.9);
  const GradientEstimate siw = siw_estimate(policy, batch, 0.9);
  CHECK((onp.vector - siw.vector).norm() <= 1e-12);
  CHECK(siw.n_trajectories_used == 8);
}

TEST_CASE("SIW matches the analytic bandit gradient") {
  // One-step bandit with reward R(a) = a: J(theta) = theta, dJ = 1.
  Vec zero(1), s(1), t(1);
  zero << 0.0;
  s << 1.0;
  t << 0.2;
  LinearGaussianPolicy behavior(zero, 1, 1, 1.0);
  LinearGaussianPolicy target(t, 1, 1, 1.0);

  RngStream rng(4);
  const long n = 200000;
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < n; ++i) {
    Trajectory traj;
    traj.states = {s};
    traj.actions = {behavior.sample_action(s, rng)};
    traj.rewards = {traj.actions[0][0]};
    traj.behavior_logliks = {behavior.step_logdensity(s, traj.actions[0])};
    const GradientEstimate e = siw_estimate(target, {traj}, 1.0);
    const double d = e.vector[0] - mean;
    mean += d / (i + 1);
    m2 += d * (e.vector[0] - mean);
  }
  const double se = std::sqrt(m2 / (n - 1) / n);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("SIW overflow fault") {
  RngStream rng(5);
  LinearGaussianPolicy policy = random_policy(rng, 1, 1, 0.3);
  Trajectory traj = random_traj(rng, policy, 1);
  traj.behavior_logliks = {-800.0};  // forces an importance weight beyond exp(700)
  CHECK_THROWS_AS(siw_estimate(policy, {traj}, 1.0), Fault);
}

TEST_CASE("constant-MIW reductions") {
  RngStream rng(6);
  LinearGaussianPolicy policy = random_policy(rng, 2, 2, 0.5);

  WindowBuffer single(0);
  single.push(1, policy, random_batch(rng, policy, 6, 4, 1));
  const GradientEstimate onp = onpolicy_estimate(policy, single.entries()[0].batch, 0.9);
  const GradientEstimate miw = miw_constant_estimate(policy, single, 0.9);
  CHECK((onp.vector - miw.vector).norm() <= 1e-12);

  // Two iterates with the identical policy: the average of the batch means.
  WindowBuffer twin(0);
  twin.push(1, policy, random_batch(rng, policy, 4, 3, 1));
  twin.push(2, policy, random_batch(rng, policy, 4, 3, 2));
  const Vec avg = 0.5 * (onpolicy_estimate(policy, twin.entries()[0].batch, 0.9).vector +
                         onpolicy_estimate(policy, twin.entries()[1].batch, 0.9).vector);
  CHECK((miw_constant_estimate(policy, twin, 0.9).vector - avg).norm() <= 1e-12);
}

TEST_CASE("balance heuristic reductions and defensiveness") {
  RngStream rng(7);
  LinearGaussianPolicy policy = random_policy(rng, 2, 1, 0.5);

  WindowBuffer single(0, BufferMode::RetainPolicies);
  single.push(1, policy, random_batch(rng, policy, 5, 4, 1));
  const GradientEstimate onp = onpolicy_estimate(policy, single.entries()[0].batch, 1.0);
  const GradientEstimate bh = bh_estimate(policy, single, 1.0);
  CHECK((onp.vector - bh.vector).norm() <= 1e-12);

  // All window policies identical: on-policy mean over the pooled batch.
  WindowBuffer pooled(0, BufferMode::RetainPolicies);
  pooled.push(1, policy, random_batch(rng, policy, 3, 4, 1));
  pooled.push(2, policy, random_batch(rng, policy, 3, 4, 2));
  std::vector<Trajectory> all = pooled.entries()[0].batch;
  for (const auto& t : pooled.entries()[1].batch) all.push_back(t);
  const GradientEstimate mean_all = onpolicy_estimate(policy, all, 1.0);
  CHECK((bh_estimate(policy, pooled, 1.0).vector - mean_all.vector).norm() <= 1e-12);

  // Effective weight bound M/N_h with the target inside the window.
  RandomWindow w = random_window(rng, 4, 3, 3, 2, 1, 0.5, BufferMode::RetainPolicies);
  const LinearGaussianPolicy& target = w.policies.back();
  const LoglikTable table = w.buffer.target_logliks(target);
  const LoglikTable mix = w.buffer.bh_mixture_logliks();
  const double bound = static_cast<double>(w.buffer.total_trajectories()) / 3.0;
  for (size_t i = 0; i < table.size(); ++i)
    for (size_t j = 0; j < table[i].size(); ++j)
      CHECK(std::exp(table[i][j] - mix[i][j]) <= bound * (1.0 + 1e-12));
}

TEST_CASE("power-mean weight properties") {
  CHECK(power_mean_weight(0.3, 0.7, 0.0) == 0.3);
  // lambda = 1 ignores the importance weight entirely.
  CHECK(power_mean_weight(0.5, 1.0, 123.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(power_mean_weight(0.5, 1.0, -123.0) == doctest::Approx(0.5).epsilon(1e-15));
  // Bounded by alpha/lambda for any ratio.
  RngStream rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = rng.uniform();
    const double lambda = 1e-3 + rng.uniform() * (1.0 - 1e-3);
    const double lr = 50.0 * rng.normal();
    const double w = power_mean_weight(alpha, lambda, lr);
    CHECK(w > 0.0);
    CHECK(w <= alpha / lambda * (1.0 + 1e-12));
  }
  // No overflow even for extreme ratios.
  CHECK(power_mean_weight(1.0, 0.25, 5000.0) >= 0.0);
  CHECK(power_mean_weight(1.0, 0.25, -5000.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(power_mean_weight(1.0, 0.0, -5000.0), Fault);
}

TEST_CASE("power-mean estimator reductions") {
  RngStream rng(9);
  LinearGaussianPolicy policy = random_policy(rng, 2, 1, 0.4);

  // Window of one iterate: exactly the on-policy mean for any lambda.
  WindowBuffer single(0);
  single.push(1, policy, random_batch(rng, policy, 6, 4, 1));
  MpmCoefficients c1;
  c1.alpha = {1.0};
  c1.lambda = {0.37};
  const GradientEstimate onp = onpolicy_estimate(policy, single.entries()[0].batch, 0.9);
  const GradientEstimate mpm = mpm_estimate(policy, single, c1, 0.9);
  CHECK((onp.vector - mpm.vector).norm() <= 1e-12);

  // lambda -> 0 recovers constant-MIW with beta_i = alpha_i.
  RandomWindow w = random_window(rng, 3, 4, 3, 2, 1, 0.4, BufferMode::TrajectoriesOnly);
  const LinearGaussianPolicy target = w.policies.back();
  MpmCoefficients c0;
  c0.alpha.assign(3, 1.0 / 3.0);
  c0.lambda.assign(3, 0.0);
  const GradientEstimate lim = mpm_estimate(target, w.buffer, c0, 0.9);
  const GradientEstimate miw = miw_constant_estimate(target, w.buffer, 0.9);
  const double rel = (lim.vector - miw.vector).norm() / std::max(miw.vector.norm(), 1e-12);
  CHECK(rel <= 1e-12);
}

TEST_CASE("estimator determinism") {
  RngStream rng(10);
  RandomWindow w = random_window(rng, 3, 4, 4, 2, 1, 0.4, BufferMode::TrajectoriesOnly);
  MpmCoefficients c;
  c.alpha.assign(3, 1.0 / 3.0);
  c.lambda.assign(3, 0.2);
  const Vec a = mpm_estimate(w.policies.back(), w.buffer, c, 0.9).vector;
  const Vec b = mpm_estimate(w.policies.back(), w.buffer, c, 0.9).vector;
  CHECK((a.array() == b.array()).all());
}

TEST_CASE("parameter-based power-mean estimator") {
  RngStream rng(11);
  Vec mean(2);
  mean << 0.3, -0.2;
  GaussianHyperpolicy hyper(mean, 0.25);

  // Window of one iterate reduces to the plain batch hyper-gradient.
  HyperWindowEntry entry;
  entry.iterate = 1;
  entry.hyper_mean = mean;
  Vec manual = Vec::Zero(2);
  for (int j = 0; j < 16; ++j) {
    const Vec theta = hyper.sample(rng);
    const double ret = rng.normal();
    entry.theta_samples.push_back(theta);
    entry.returns.push_back(ret);
    entry.behavior_logliks.push_back(hyper.logdensity(theta));
    manual += ret * hyper.score(theta);
  }
  manual /= 16.0;
  MpmCoefficients c;
  c.alpha = {1.0};
  c.lambda = {0.5};
  const GradientEstimate est = pgpe_mpm_estimate(hyper, {entry}, c);
  CHECK((est.vector - manual).norm() <= 1e-12);

  // Zero returns give a zero gradient.
  HyperWindowEntry zero = entry;
  for (double& r : zero.returns) r = 0.0;
  CHECK(pgpe_mpm_estimate(hyper, {zero}, c).vector.norm() == doctest::Approx(0.0));
}

TEST_CASE("parameter-based gradient matches a quadrature oracle") {
  // J(theta) = -theta^2 in one dimension; J_P(xi) = E_{theta~N(xi,s2)}[J].
  // The oracle integrates numerically and differentiates centrally.
  const double s2 = 0.25;
  const double xi = 0.3;
  auto j_p = [&](double m) {
    const double sd = std::sqrt(s2);
    const int n = 20001;
    const double lo = m - 8 * sd, hi = m + 8 * sd;
    const double h = (hi - lo) / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lo + i * h;
      const double pdf = std::exp(-(x - m) * (x - m) / (2 * s2)) / std::sqrt(2 * M_PI * s2);
      const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      acc += w * pdf * (-x * x);
    }
    return acc * h;
  };
  const double fd = (j_p(xi + 1e-4) - j_p(xi - 1e-4)) / 2e-4;
  CHECK(fd == doctest::Approx(-2.0 * xi).epsilon(1e-4));  // analytic cross-check

  Vec mean(1);
  mean << xi;
  GaussianHyperpolicy hyper(mean, s2);
  RngStream rng(12);
  const long n = 100000;
  double acc = 0.0, m2 = 0.0;
  for (long i = 0; i < n; ++i) {
    const Vec theta = hyper.sample(rng);
    const double g = hyper.score(theta)[0] * (-theta.squaredNorm());
    const double d = g - acc;
    acc += d / (i + 1);
    m2 += d * (g - acc);
  }
  const double se = std::sqrt(m2 / (n - 1) / n);
  CHECK(std::abs(acc - fd) <= 3.0 * se);
}
