#ifndef PGREUSE_ENV_HPP
#define PGREUSE_ENV_HPP

#include <memory>
#include <string>

#include "pgreuse/common.hpp"
#include "pgreuse/trajectory.hpp"

namespace pgreuse {

struct StepResult {
  Vec next_state;
  double reward = 0.0;
  bool done = false;
};

/// Environment dynamics as pure functions of (state, action, rng). No
/// internal mutable state, so rollouts can run concurrently on one
/// environment object given disjoint random streams.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual const EnvironmentSpec& spec() const = 0;
  virtual Vec reset(RngStream& rng) const = 0;
  virtual StepResult step(const Vec& state, const Vec& action, RngStream& rng) const = 0;
};

/// Cart pole with a continuous force input. Classic physics: gravity 9.8,
/// cart mass 1.0, pole mass 0.1, pole half-length 0.5, Euler integration at
/// 0.02 s. The scalar action is clipped to [-10, 10] and applied as the
/// force. Reward is +1 per surviving step; the episode terminates when
/// |x| > 2.4 or the pole tilts past 12 degrees. Initial state is uniform in
/// [-0.05, 0.05]^4.
class CartPoleEnv final : public Environment {
 public:
  explicit CartPoleEnv(int horizon = 200, double gamma = 1.0);
  const EnvironmentSpec& spec() const override { return spec_; }
  Vec reset(RngStream& rng) const override;
  StepResult step(const Vec& state, const Vec& action, RngStream& rng) const override;

 private:
  EnvironmentSpec spec_;
};

/// One-step quadratic bowl: a single constant state, reward -a^2 (clipped to
/// the declared bound). Handy as a fast synthetic target whose expected
/// return is known in closed form.
class QuadraticBowlEnv final : public Environment {
 public:
  explicit QuadraticBowlEnv(double reward_bound = 100.0);
  const EnvironmentSpec& spec() const override { return spec_; }
  Vec reset(RngStream& rng) const override;
  StepResult step(const Vec& state, const Vec& action, RngStream& rng) const override;

 private:
  EnvironmentSpec spec_;
};

/// Factory for the environments addressable from configuration files.
std::unique_ptr<Environment> make_environment(const std::string& name, int horizon,
                                              double gamma);

}  // namespace pgreuse

#endif  // PGREUSE_ENV_HPP
