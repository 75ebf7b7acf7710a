#ifndef PGREUSE_COEFFICIENTS_HPP
#define PGREUSE_COEFFICIENTS_HPP

#include <string>
#include <vector>

#include "pgreuse/common.hpp"

namespace pgreuse {

/// How the (alpha_i, lambda_i) pairs are produced.
/// Theory: uniform alpha with the dimension- and confidence-dependent lambda
///   driven by a global divergence bound D.
/// TheorySimple: uniform alpha with lambda = sqrt(1/(D N w)), the stripped
///   form used for the theory-coefficient ablations.
/// Adaptive: per-iterate coefficients driven by empirical divergence
///   estimates, both shrinking as an iterate drifts away from the target.
enum class ScheduleTag { Theory, TheorySimple, Adaptive };

std::string to_string(ScheduleTag tag);

/// Per-window-iterate mixture coefficients alpha_i (summing to 1) and
/// power-mean coefficients lambda_i in (0, 1]. Entries are ordered oldest to
/// newest, aligned with the window buffer.
struct MpmCoefficients {
  std::vector<double> alpha;
  std::vector<double> lambda;
  ScheduleTag tag = ScheduleTag::Adaptive;
  bool lambda_clamped = false;  // some lambda exceeded 1 and was clamped

  int size() const { return static_cast<int>(alpha.size()); }
  double mean_alpha() const;
  double mean_lambda() const;
};

/// lambda = sqrt(4 (d_theta log 6 + log(1/delta)) / (3 D N w)), alpha = 1/w.
/// The formula assumes the batch size is large enough that lambda <= 1;
/// smaller batches get lambda clamped to 1 with the clamp flagged (a clamped
/// lambda makes the power-mean weight exactly alpha, ignoring the
/// importance weight).
MpmCoefficients theory_schedule(int d_theta, double delta, double D, int N, int omega_k);

/// lambda = sqrt(1 / (D N w)), alpha = 1/w, clamped like theory_schedule.
MpmCoefficients simple_theory_schedule(double D, int N, int omega_k);

/// lambda_i = sqrt(1 / ((Dhat_i + 1) N w)),
/// alpha_i = (Dhat_i + 1)^(-1/2) / sum_l (Dhat_l + 1)^(-1/2).
/// dhat has one chi-square divergence estimate per window iterate, oldest
/// first; the last entry is the current iterate and must be 0.
MpmCoefficients adaptive_schedule(const std::vector<double>& dhat, int N, int omega_k);

}  // namespace pgreuse

#endif  // PGREUSE_COEFFICIENTS_HPP
