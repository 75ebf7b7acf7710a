#ifndef PGREUSE_OPTIMIZER_HPP
#define PGREUSE_OPTIMIZER_HPP

#include "pgreuse/common.hpp"

namespace pgreuse {

enum class OptimizerMode { Constant, Adam };

/// Gradient-ascent update rule. Constant: theta + step * g. Adam: the
/// standard bias-corrected moment update with ascent sign and defaults
/// beta1 = 0.9, beta2 = 0.999, eps = 1e-8; `step` is the initial rate.
class Optimizer {
 public:
  Optimizer(OptimizerMode mode, double step, int dim);

  Vec ascend(const Vec& theta, const Vec& grad);

  OptimizerMode mode() const { return mode_; }
  long timestep() const { return t_; }

 private:
  OptimizerMode mode_;
  double step_;
  Vec m_;
  Vec v_;
  long t_ = 0;

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
};

}  // namespace pgreuse

#endif  // PGREUSE_OPTIMIZER_HPP
