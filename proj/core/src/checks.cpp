#include "pgreuse/checks.hpp"

#include <cmath>

#include "pgreuse/divergence.hpp"
#include "pgreuse/estimators.hpp"
#include "pgreuse/rollout.hpp"

namespace pgreuse {

namespace {

struct VecWelford {
  long n = 0;
  Vec mean;
  Vec m2;
  explicit VecWelford(int d) : mean(Vec::Zero(d)), m2(Vec::Zero(d)) {}
  void add(const Vec& x) {
    ++n;
    const Vec d = x - mean;
    mean += d / n;
    m2 += d.cwiseProduct(x - mean);
  }
  Vec variance() const { return n > 1 ? Vec(m2 / (n - 1)) : Vec(Vec::Zero(mean.size())); }
};

double max_z(const Vec& mean, const Vec& exact, const Vec& se) {
  double worst = 0.0;
  for (int c = 0; c < mean.size(); ++c) {
    const double denom = se[c] > 0.0 ? se[c] : 1e-300;
    worst = std::max(worst, std::abs(mean[c] - exact[c]) / denom);
  }
  return worst;
}

}  // namespace

FiniteMdp oracle_mdp() {
  FiniteMdp mdp;
  mdp.n_states = 2;
  mdp.n_actions = 2;
  mdp.transition = {{{0.7, 0.3}, {0.2, 0.8}}, {{0.4, 0.6}, {0.9, 0.1}}};
  mdp.reward = {{1.0, -0.5}, {0.3, 2.0}};
  mdp.initial = {0.6, 0.4};
  mdp.horizon = 3;
  mdp.gamma = 0.9;
  return mdp;
}

Vec oracle_behavior_logits() {
  Vec v(4);
  v << 0.2, -0.1, 0.4, 0.3;
  return v;
}

Vec oracle_target_logits() {
  Vec v(4);
  v << -0.3, 0.5, 0.1, -0.2;
  return v;
}

std::vector<ZCheck> run_oracle_suite(long n_rollouts, std::uint64_t seed) {
  const FiniteMdp mdp = oracle_mdp();
  const FiniteMdpEnv env(mdp);
  const double gamma = mdp.gamma;
  const TabularSoftmaxPolicy behavior(oracle_behavior_logits(), 2, 2);
  const TabularSoftmaxPolicy behavior2(Vec(oracle_behavior_logits().array() - 0.25), 2, 2);
  const TabularSoftmaxPolicy target(oracle_target_logits(), 2, 2);

  const Vec exact_b = exact_gradient(mdp, behavior, gamma);
  const Vec exact_t = exact_gradient(mdp, target, gamma);
  const int d = behavior.param_dim();

  VecWelford reinforce(d), gpomdp(d), siw(d), miw1(d), miw2(d);
  for (long i = 0; i < n_rollouts; ++i) {
    RngStream rng = RngStream::derive(seed, 0x6f7261ULL, i);
    const Trajectory traj = rollout(env, behavior, rng);
    reinforce.add(reinforce_grad(behavior, traj, gamma));
    gpomdp.add(gpomdp_grad(behavior, traj, gamma));
    // Independent target: weight the same trajectory toward it.
    siw.add(std::exp(traj_logratio(target, traj)) * gpomdp_grad(target, traj, gamma));
    miw1.add(std::exp(traj_logratio(target, traj)) * gpomdp_grad(target, traj, gamma));
    // Second behavioral group for the two-iterate constant-MIW check.
    RngStream rng2 = RngStream::derive(seed, 0x6f7262ULL, i);
    const Trajectory traj2 = rollout(env, behavior2, rng2);
    miw2.add(std::exp(traj_logratio(target, traj2)) * gpomdp_grad(target, traj2, gamma));
  }

  std::vector<ZCheck> checks;
  auto push = [&](const std::string& name, const Vec& mean, const Vec& exact, const Vec& se) {
    ZCheck c;
    c.name = name;
    c.max_abs_z = max_z(mean, exact, se);
    c.pass = c.max_abs_z <= 3.0;
    checks.push_back(c);
  };

  auto se_of = [&](const VecWelford& w) {
    return Vec((w.variance() / static_cast<double>(w.n)).cwiseSqrt());
  };
  push("REINFORCE vs exact", reinforce.mean, exact_b, se_of(reinforce));
  push("GPOMDP vs exact", gpomdp.mean, exact_b, se_of(gpomdp));
  push("SIW (independent target) vs exact", siw.mean, exact_t, se_of(siw));

  // Constant-MIW with beta = 1/2 over the two behavioral groups: the
  // estimate averages the group means, the variances add with weight 1/4.
  const Vec miw_mean = 0.5 * (miw1.mean + miw2.mean);
  const Vec miw_se =
      (0.25 * (miw1.variance() / static_cast<double>(miw1.n) +
               miw2.variance() / static_cast<double>(miw2.n)))
          .cwiseSqrt();
  push("constant-MIW (independent target) vs exact", miw_mean, exact_t, miw_se);
  return checks;
}

std::vector<DivergenceCheck> run_divergence_checks(long n_samples, std::uint64_t seed) {
  const double sigma2 = 1.0;
  Vec zero(1), one_state(1);
  zero << 0.0;
  one_state << 1.0;
  const LinearGaussianPolicy behavior(zero, 1, 1, sigma2);

  const long chunk = std::min<long>(n_samples, 100000);
  const long n_chunks = (n_samples + chunk - 1) / chunk;

  std::vector<DivergenceCheck> checks;
  for (double shift : {0.1, 0.25, 0.5}) {
    Vec t(1);
    t << shift;
    const LinearGaussianPolicy target(t, 1, 1, sigma2);
    const double reference =
        gaussian_state_dalpha(target.mean_action(one_state), behavior.mean_action(one_state),
                              sigma2, 2.0);
    double acc = 0.0;
    double step_product_value = 0.0;
    for (long c = 0; c < n_chunks; ++c) {
      std::vector<Trajectory> batch(chunk);
      for (long j = 0; j < chunk; ++j) {
        RngStream rng = RngStream::derive(seed, 0x646976ULL, c, j);
        Trajectory& traj = batch[j];
        traj.states = {one_state};
        traj.actions = {behavior.sample_action(one_state, rng)};
        traj.rewards = {0.0};
        traj.behavior_logliks = {behavior.step_logdensity(traj.states[0], traj.actions[0])};
        traj.behavior_means = {behavior.mean_action(one_state)};
      }
      acc += naive_is_dalpha(target, batch, 2.0).d_alpha_hat;
      if (c == 0) {
        // Structural exactness on a one-step problem: a single trajectory
        // keeps the comparison free of mean-accumulation rounding.
        const std::vector<Trajectory> one{batch.front()};
        step_product_value = step_product_dalpha(target, behavior, one, 2.0).d_alpha_hat;
      }
    }
    const double naive = acc / n_chunks;

    DivergenceCheck naive_check;
    naive_check.name = "naive IS vs closed form, shift " + std::to_string(shift);
    naive_check.reference = reference;
    naive_check.estimate = naive;
    naive_check.rel_error = std::abs(naive - reference) / reference;
    naive_check.pass = naive_check.rel_error <= 0.05;
    checks.push_back(naive_check);

    DivergenceCheck sp_check;
    sp_check.name = "step product exact on T=1, shift " + std::to_string(shift);
    sp_check.reference = reference;
    sp_check.estimate = step_product_value;
    sp_check.rel_error = std::abs(step_product_value - reference) / reference;
    sp_check.pass = sp_check.rel_error <= 1e-12;
    checks.push_back(sp_check);
  }
  return checks;
}

}  // namespace pgreuse
