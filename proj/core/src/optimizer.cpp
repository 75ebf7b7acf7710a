#include "pgreuse/optimizer.hpp"

#include <cmath>

namespace pgreuse {

Optimizer::Optimizer(OptimizerMode mode, double step, int dim)
    : mode_(mode), step_(step), m_(Vec::Zero(dim)), v_(Vec::Zero(dim)) {
  if (step <= 0.0) throw Fault("Optimizer: step size must be positive");
  if (dim <= 0) throw Fault("Optimizer: dimension must be positive");
}

Vec Optimizer::ascend(const Vec& theta, const Vec& grad) {
  if (theta.size() != m_.size() || grad.size() != m_.size())
    throw Fault("Optimizer::ascend: dimension mismatch");
  if (!grad.allFinite()) throw Fault("Optimizer::ascend: non-finite gradient");

  if (mode_ == OptimizerMode::Constant) return theta + step_ * grad;

  ++t_;
  m_ = kBeta1 * m_ + (1.0 - kBeta1) * grad;
  v_ = kBeta2 * v_ + (1.0 - kBeta2) * grad.cwiseProduct(grad);
  const double m_corr = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double v_corr = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  Vec update(theta.size());
  for (int i = 0; i < theta.size(); ++i) {
    const double mhat = m_[i] / m_corr;
    const double vhat = v_[i] / v_corr;
    update[i] = step_ * mhat / (std::sqrt(vhat) + kEps);
  }
  return theta + update;
}

}  // namespace pgreuse
