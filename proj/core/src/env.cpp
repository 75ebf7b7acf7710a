#include "pgreuse/env.hpp"

#include <algorithm>
#include <cmath>

namespace pgreuse {

namespace {
constexpr double kGravity = 9.8;
constexpr double kMassCart = 1.0;
constexpr double kMassPole = 0.1;
constexpr double kTotalMass = kMassCart + kMassPole;
constexpr double kHalfLength = 0.5;
constexpr double kPoleMassLength = kMassPole * kHalfLength;
constexpr double kDt = 0.02;
constexpr double kForceLimit = 10.0;
constexpr double kXLimit = 2.4;
constexpr double kThetaLimit = 12.0 * M_PI / 180.0;
}  // namespace

CartPoleEnv::CartPoleEnv(int horizon, double gamma) {
  if (gamma == 1.0 && horizon <= 0)
    throw Fault("CartPoleEnv: gamma = 1 requires a finite horizon");
  spec_ = EnvironmentSpec{4, 1, horizon, gamma, 1.0};
}

Vec CartPoleEnv::reset(RngStream& rng) const {
  Vec s(4);
  for (int i = 0; i < 4; ++i) s[i] = -0.05 + 0.1 * rng.uniform();
  return s;
}

StepResult CartPoleEnv::step(const Vec& state, const Vec& action, RngStream&) const {
  const double x = state[0], x_dot = state[1], theta = state[2], theta_dot = state[3];
  const double force = std::clamp(action[0], -kForceLimit, kForceLimit);

  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double temp =
      (force + kPoleMassLength * theta_dot * theta_dot * sin_t) / kTotalMass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kHalfLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / kTotalMass));
  const double x_acc = temp - kPoleMassLength * theta_acc * cos_t / kTotalMass;

  StepResult out;
  out.next_state = Vec(4);
  out.next_state[0] = x + kDt * x_dot;
  out.next_state[1] = x_dot + kDt * x_acc;
  out.next_state[2] = theta + kDt * theta_dot;
  out.next_state[3] = theta_dot + kDt * theta_acc;
  out.reward = 1.0;
  out.done = std::abs(out.next_state[0]) > kXLimit ||
             std::abs(out.next_state[2]) > kThetaLimit;
  return out;
}

QuadraticBowlEnv::QuadraticBowlEnv(double reward_bound) {
  spec_ = EnvironmentSpec{1, 1, 1, 1.0, reward_bound};
}

Vec QuadraticBowlEnv::reset(RngStream&) const {
  Vec s(1);
  s[0] = 1.0;
  return s;
}

StepResult QuadraticBowlEnv::step(const Vec& state, const Vec& action, RngStream&) const {
  StepResult out;
  out.next_state = state;
  out.reward = std::max(-action.squaredNorm(), -spec_.reward_bound);
  out.done = true;
  return out;
}

std::unique_ptr<Environment> make_environment(const std::string& name, int horizon,
                                              double gamma) {
  if (name == "cartpole") return std::make_unique<CartPoleEnv>(horizon, gamma);
  if (name == "quadbowl") return std::make_unique<QuadraticBowlEnv>();
  throw ConfigError("unknown environment: " + name);
}

}  // namespace pgreuse
