#include "pgreuse/finite_mdp.hpp"

#include <cmath>
#include <functional>

namespace pgreuse {

void FiniteMdp::validate() const {
  auto check_dist = [](const std::vector<double>& p, const char* what) {
    double sum = 0.0;
    for (double v : p) {
      if (v < 0.0) throw Fault(std::string("FiniteMdp: negative probability in ") + what);
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw Fault(std::string("FiniteMdp: ") + what + " does not sum to 1");
  };
  check_dist(initial, "initial distribution");
  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a) check_dist(transition[s][a], "transition row");
}

double FiniteMdp::reward_bound() const {
  double m = 0.0;
  for (const auto& row : reward)
    for (double r : row) m = std::max(m, std::abs(r));
  return m;
}

TabularSoftmaxPolicy::TabularSoftmaxPolicy(const Vec& logits, int n_states, int n_actions)
    : logits_(logits), n_states_(n_states), n_actions_(n_actions) {
  if (logits.size() != static_cast<long>(n_states) * n_actions)
    throw Fault("TabularSoftmaxPolicy: logit size does not match n_states*n_actions");
}

std::vector<double> TabularSoftmaxPolicy::action_probs(int state) const {
  std::vector<double> p(n_actions_);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n_actions_; ++a)
    max_logit = std::max(max_logit, logits_[state * n_actions_ + a]);
  double z = 0.0;
  for (int a = 0; a < n_actions_; ++a) {
    p[a] = std::exp(logits_[state * n_actions_ + a] - max_logit);
    z += p[a];
  }
  for (double& v : p) v /= z;
  return p;
}

Vec TabularSoftmaxPolicy::sample_action(const Vec& state, RngStream& rng) const {
  const auto p = action_probs(static_cast<int>(state[0]));
  const double u = rng.uniform();
  double acc = 0.0;
  int pick = n_actions_ - 1;
  for (int a = 0; a < n_actions_; ++a) {
    acc += p[a];
    if (u < acc) {
      pick = a;
      break;
    }
  }
  Vec out(1);
  out[0] = pick;
  return out;
}

double TabularSoftmaxPolicy::step_logdensity(const Vec& state, const Vec& action) const {
  const auto p = action_probs(static_cast<int>(state[0]));
  return std::log(p[static_cast<int>(action[0])]);
}

Vec TabularSoftmaxPolicy::score(const Vec& state, const Vec& action) const {
  const int s = static_cast<int>(state[0]);
  const int a = static_cast<int>(action[0]);
  const auto p = action_probs(s);
  Vec g = Vec::Zero(logits_.size());
  for (int b = 0; b < n_actions_; ++b)
    g[s * n_actions_ + b] = (b == a ? 1.0 : 0.0) - p[b];
  return g;
}

std::unique_ptr<Policy> TabularSoftmaxPolicy::with_params(const Vec& params) const {
  return std::make_unique<TabularSoftmaxPolicy>(params, n_states_, n_actions_);
}

FiniteMdpEnv::FiniteMdpEnv(FiniteMdp mdp) : mdp_(std::move(mdp)) {
  mdp_.validate();
  spec_ = EnvironmentSpec{1, 1, mdp_.horizon, mdp_.gamma, mdp_.reward_bound()};
}

namespace {
int sample_index(const std::vector<double>& p, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}
}  // namespace

Vec FiniteMdpEnv::reset(RngStream& rng) const {
  Vec s(1);
  s[0] = sample_index(mdp_.initial, rng);
  return s;
}

StepResult FiniteMdpEnv::step(const Vec& state, const Vec& action, RngStream& rng) const {
  const int s = static_cast<int>(state[0]);
  const int a = static_cast<int>(action[0]);
  StepResult out;
  out.reward = mdp_.reward[s][a];
  out.next_state = Vec(1);
  out.next_state[0] = sample_index(mdp_.transition[s][a], rng);
  out.done = false;
  return out;
}

namespace {

// DFS over all trajectories; calls visit(prob, score_sum, ret) per leaf.
void enumerate_trajectories(
    const FiniteMdp& mdp, const TabularSoftmaxPolicy& policy, double gamma,
    const std::function<void(double, const Vec&, double)>& visit) {
  const int T = mdp.horizon;
  std::vector<std::vector<double>> probs(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) probs[s] = policy.action_probs(s);

  std::function<void(int, int, double, Vec&, double, double)> rec =
      [&](int t, int s, double prob, Vec& score_sum, double ret, double disc) {
        if (t == T) {
          visit(prob, score_sum, ret);
          return;
        }
        Vec state_vec(1), action_vec(1);
        state_vec[0] = s;
        for (int a = 0; a < mdp.n_actions; ++a) {
          if (probs[s][a] <= 0.0) continue;
          action_vec[0] = a;
          const Vec sc = policy.score(state_vec, action_vec);
          score_sum += sc;
          const double r = ret + disc * mdp.reward[s][a];
          const double p = prob * probs[s][a];
          if (t + 1 == T) {
            // The transition after the final action marginalizes out.
            rec(t + 1, s, p, score_sum, r, disc * gamma);
          } else {
            for (int s2 = 0; s2 < mdp.n_states; ++s2) {
              const double pt = mdp.transition[s][a][s2];
              if (pt <= 0.0) continue;
              rec(t + 1, s2, p * pt, score_sum, r, disc * gamma);
            }
          }
          score_sum -= sc;
        }
      };

  for (int s0 = 0; s0 < mdp.n_states; ++s0) {
    if (mdp.initial[s0] <= 0.0) continue;
    Vec score_sum = Vec::Zero(policy.param_dim());
    rec(0, s0, mdp.initial[s0], score_sum, 0.0, 1.0);
  }
}

void check_budget(const FiniteMdp& mdp, long budget) {
  double count = 1.0;
  for (int t = 0; t < mdp.horizon; ++t) count *= mdp.n_states * mdp.n_actions;
  if (count > static_cast<double>(budget))
    throw Fault("exact_gradient: enumeration budget exceeded, about " +
                std::to_string(count) + " trajectories");
}

}  // namespace

Vec exact_gradient(const FiniteMdp& mdp, const TabularSoftmaxPolicy& policy, double gamma,
                   long budget) {
  mdp.validate();
  check_budget(mdp, budget);
  Vec grad = Vec::Zero(policy.param_dim());
  enumerate_trajectories(mdp, policy, gamma,
                         [&](double prob, const Vec& score_sum, double ret) {
                           grad += prob * ret * score_sum;
                         });
  return grad;
}

double enumerate_total_probability(const FiniteMdp& mdp, const TabularSoftmaxPolicy& policy,
                                   long budget) {
  mdp.validate();
  check_budget(mdp, budget);
  double total = 0.0;
  enumerate_trajectories(mdp, policy, mdp.gamma,
                         [&](double prob, const Vec&, double) { total += prob; });
  return total;
}

}  // namespace pgreuse
