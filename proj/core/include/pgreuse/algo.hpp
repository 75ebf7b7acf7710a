#ifndef PGREUSE_ALGO_HPP
#define PGREUSE_ALGO_HPP

#include <string>
#include <vector>

#include "pgreuse/coefficients.hpp"
#include "pgreuse/estimators.hpp"
#include "pgreuse/optimizer.hpp"

namespace pgreuse {

/// Rpg      — power-mean reuse of the last `window` iterates' trajectories,
///            coefficients from the configured schedule (adaptive default).
/// RpgTh    — Rpg pinned to the simplified theory schedule with a fixed D.
/// Gpomdp   — on-policy baseline (equivalent to Rpg with window 1).
/// MiwPg    — constant-coefficient multiple importance weighting baseline.
/// BhPg     — balance-heuristic baseline (stores window policies).
/// PgpeRpg  — parameter-based variant: Gaussian hyperpolicy over the
///            parameters of a deterministic linear controller.
enum class AlgoTag { Rpg, RpgTh, Gpomdp, MiwPg, BhPg, PgpeRpg };

enum class OutputSelection { Best, UniformRandom };

std::string to_string(AlgoTag tag);
std::string to_string(OutputSelection sel);

struct RunConfig {
  std::string name = "run";
  std::string env = "cartpole";
  int horizon = 200;
  double gamma = 1.0;
  double sigma2 = 0.3;
  double theta_init = 0.0;
  AlgoTag algo = AlgoTag::Rpg;
  int iterations = 1;
  int batch = 1;
  int window = 1;  // 0 = full reuse (unbounded)
  ScheduleTag schedule = ScheduleTag::Adaptive;
  double divergence_bound = 1.0;  // D, for the theory schedules
  double delta = 0.1;             // confidence, for the full theory schedule
  OptimizerMode optimizer = OptimizerMode::Adam;
  double step = 0.01;
  OutputSelection output = OutputSelection::Best;
  InnerEstimator inner = InnerEstimator::Gpomdp;
  int threads = 1;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  int omega_k = 0;
  long collected = 0;  // cumulative fresh trajectories
  long used = 0;       // trajectories entering this iteration's estimate
  double mean_return = 0.0;
  double grad_norm = 0.0;
  double mean_alpha = 0.0;
  double mean_lambda = 0.0;
  double mean_dhat = 0.0;
  long likelihood_evals = 0;
};

struct LearningCurve {
  std::vector<IterationRecord> rows;
  Vec theta_out;
  OutputSelection selection = OutputSelection::Best;
  std::uint64_t seed = 0;
  int skipped_iterations = 0;  // overflow-skipped updates (constant-MIW only)
};

/// Run one learning job. Deterministic in (config, seed): all randomness
/// flows through streams derived from the seed, iteration and rollout
/// indices, so results do not depend on `threads`.
LearningCurve run_algorithm(const RunConfig& config, std::uint64_t seed);

}  // namespace pgreuse

#endif  // PGREUSE_ALGO_HPP
