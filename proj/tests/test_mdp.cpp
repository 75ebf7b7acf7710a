#include <doctest.h>

#include "pgreuse/checks.hpp"
#include "pgreuse/env.hpp"
#include "pgreuse/finite_mdp.hpp"
#include "pgreuse/rollout.hpp"

using namespace pgreuse;

TEST_CASE("discounted return") {
  Trajectory traj;
  traj.rewards = {1.0, 1.0, 1.0};
  traj.states.resize(3);
  traj.actions.resize(3);
  traj.behavior_logliks.resize(3);
  CHECK(discounted_return(traj, 1.0) == doctest::Approx(3.0));
  CHECK(discounted_return(traj, 0.5) == doctest::Approx(1.75));
}

TEST_CASE("discounted return is linear in rewards") {
  RngStream rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    Trajectory traj;
    const int T = 1 + static_cast<int>(rng.uniform() * 10);
    for (int t = 0; t < T; ++t) traj.rewards.push_back(rng.normal());
    const double gamma = rng.uniform();
    const double c = 3.0 * rng.normal();
    Trajectory scaled = traj;
    for (double& r : scaled.rewards) r *= c;
    CHECK(discounted_return(scaled, gamma) ==
          doctest::Approx(c * discounted_return(traj, gamma)).epsilon(1e-12));
  }
}

TEST_CASE("cart pole rollout basics") {
  CartPoleEnv env(200, 1.0);
  Vec zero = Vec::Zero(4);
  LinearGaussianPolicy policy(zero, 4, 1, 0.3);

  RngStream rng(42);
  Trajectory traj = rollout(env, policy, rng);
  CHECK(traj.length() >= 1);
  CHECK(traj.length() <= 200);
  for (double r : traj.rewards) CHECK(r == 1.0);
  CHECK(undiscounted_return(traj) == doctest::Approx(traj.length()));
  CHECK(traj.behavior_means.size() == traj.rewards.size());

  // Same seed replays bit-identically.
  RngStream rng_a(123), rng_b(123);
  Trajectory a = rollout(env, policy, rng_a);
  Trajectory b = rollout(env, policy, rng_b);
  REQUIRE(a.length() == b.length());
  for (int t = 0; t < a.length(); ++t) {
    CHECK(a.actions[t][0] == b.actions[t][0]);
    CHECK((a.states[t].array() == b.states[t].array()).all());
    CHECK(a.behavior_logliks[t] == b.behavior_logliks[t]);
  }
}

TEST_CASE("degenerate one-state chain") {
  FiniteMdp mdp;
  mdp.n_states = 1;
  mdp.n_actions = 1;
  mdp.transition = {{{1.0}}};
  mdp.reward = {{0.5}};
  mdp.initial = {1.0};
  mdp.horizon = 3;
  FiniteMdpEnv env(mdp);
  TabularSoftmaxPolicy policy(Vec::Zero(1), 1, 1);
  RngStream rng(5);
  Trajectory traj = rollout(env, policy, rng);
  REQUIRE(traj.length() == 3);
  for (const Vec& s : traj.states) CHECK(s[0] == 0.0);
}

TEST_CASE("exact gradient on the two-armed bandit") {
  // One state, two actions, rewards (1, 0), uniform softmax, T = 1. By hand:
  // J = 1/2 and dJ/dz_a = r_a p_a (1 - p_a) - r_(1-a) p_0 p_1, so (1/4, -1/4).
  FiniteMdp mdp;
  mdp.n_states = 1;
  mdp.n_actions = 2;
  mdp.transition = {{{1.0}, {1.0}}};
  mdp.reward = {{1.0, 0.0}};
  mdp.initial = {1.0};
  mdp.horizon = 1;
  TabularSoftmaxPolicy uniform(Vec::Zero(2), 1, 2);
  const Vec g = exact_gradient(mdp, uniform, 1.0);
  CHECK(g[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("exact gradient of a zero-reward table is zero") {
  FiniteMdp mdp = oracle_mdp();
  for (auto& row : mdp.reward)
    for (double& r : row) r = 0.0;
  TabularSoftmaxPolicy policy(oracle_behavior_logits(), 2, 2);
  const Vec g = exact_gradient(mdp, policy, 0.9);
  CHECK(g.norm() == doctest::Approx(0.0));
}

TEST_CASE("enumerated trajectory probabilities sum to one") {
  const FiniteMdp mdp = oracle_mdp();
  TabularSoftmaxPolicy policy(oracle_behavior_logits(), 2, 2);
  CHECK(enumerate_total_probability(mdp, policy) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("enumeration budget guard") {
  FiniteMdp mdp = oracle_mdp();
  mdp.horizon = 20;  // (2*2)^20 trajectories
  TabularSoftmaxPolicy policy(oracle_behavior_logits(), 2, 2);
  CHECK_THROWS_AS(exact_gradient(mdp, policy, 0.9), Fault);
}

TEST_CASE("Monte-Carlo estimators agree with the enumeration oracle") {
  for (const ZCheck& c : run_oracle_suite(20000, 11)) {
    INFO(c.name, " max |z| = ", c.max_abs_z);
    CHECK(c.pass);
  }
}

TEST_CASE("transition rows must be stochastic") {
  FiniteMdp mdp = oracle_mdp();
  mdp.transition[0][1] = {0.5, 0.6};
  CHECK_THROWS_AS(mdp.validate(), Fault);
}
