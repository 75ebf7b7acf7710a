#include "pgreuse/coefficients.hpp"

#include <cmath>
#include <numeric>

namespace pgreuse {

std::string to_string(ScheduleTag tag) {
  switch (tag) {
    case ScheduleTag::Theory: return "theory";
    case ScheduleTag::TheorySimple: return "theory-simple";
    case ScheduleTag::Adaptive: return "adaptive";
  }
  return "?";
}

double MpmCoefficients::mean_alpha() const {
  if (alpha.empty()) return 0.0;
  return std::accumulate(alpha.begin(), alpha.end(), 0.0) / alpha.size();
}

double MpmCoefficients::mean_lambda() const {
  if (lambda.empty()) return 0.0;
  return std::accumulate(lambda.begin(), lambda.end(), 0.0) / lambda.size();
}

namespace {
MpmCoefficients uniform_coeffs(double lam, int omega_k, ScheduleTag tag) {
  MpmCoefficients c;
  c.tag = tag;
  c.lambda_clamped = lam > 1.0;
  lam = std::min(lam, 1.0);
  c.alpha.assign(omega_k, 1.0 / omega_k);
  c.lambda.assign(omega_k, lam);
  return c;
}
}  // namespace

MpmCoefficients theory_schedule(int d_theta, double delta, double D, int N, int omega_k) {
  if (d_theta <= 0) throw Fault("theory_schedule: d_theta must be positive");
  if (delta <= 0.0 || delta >= 1.0) throw Fault("theory_schedule: delta must be in (0,1)");
  if (D < 1.0) throw Fault("theory_schedule: D must be >= 1");
  if (N <= 0 || omega_k <= 0) throw Fault("theory_schedule: N and omega_k must be positive");
  const double lam = std::sqrt(4.0 * (d_theta * std::log(6.0) + std::log(1.0 / delta)) /
                               (3.0 * D * N * omega_k));
  return uniform_coeffs(lam, omega_k, ScheduleTag::Theory);
}

MpmCoefficients simple_theory_schedule(double D, int N, int omega_k) {
  if (D <= 0.0) throw Fault("simple_theory_schedule: D must be positive");
  if (N <= 0 || omega_k <= 0)
    throw Fault("simple_theory_schedule: N and omega_k must be positive");
  const double lam = std::sqrt(1.0 / (D * N * omega_k));
  return uniform_coeffs(lam, omega_k, ScheduleTag::TheorySimple);
}

MpmCoefficients adaptive_schedule(const std::vector<double>& dhat, int N, int omega_k) {
  if (static_cast<int>(dhat.size()) != omega_k)
    throw Fault("adaptive_schedule: need one divergence estimate per window iterate");
  if (N <= 0 || omega_k <= 0) throw Fault("adaptive_schedule: N and omega_k must be positive");
  for (double d : dhat)
    if (d < 0.0 || !std::isfinite(d))
      throw Fault("adaptive_schedule: divergence estimates must be finite and >= 0");
  if (dhat.back() != 0.0)
    throw Fault("adaptive_schedule: the current iterate's divergence must be 0");

  MpmCoefficients c;
  c.tag = ScheduleTag::Adaptive;
  c.alpha.resize(omega_k);
  c.lambda.resize(omega_k);
  double norm = 0.0;
  for (int i = 0; i < omega_k; ++i) {
    const double w = 1.0 / std::sqrt(dhat[i] + 1.0);
    c.alpha[i] = w;
    norm += w;
    double lam = std::sqrt(1.0 / ((dhat[i] + 1.0) * N * omega_k));
    if (lam > 1.0) {
      c.lambda_clamped = true;
      lam = 1.0;
    }
    c.lambda[i] = lam;
  }
  for (double& a : c.alpha) a /= norm;
  return c;
}

}  // namespace pgreuse
