#include "pgreuse/algo.hpp"

#include <cmath>
#include <iostream>

#include "pgreuse/divergence.hpp"
#include "pgreuse/env.hpp"
#include "pgreuse/rollout.hpp"

namespace pgreuse {

std::string to_string(AlgoTag tag) {
  switch (tag) {
    case AlgoTag::Rpg: return "RPG";
    case AlgoTag::RpgTh: return "RPG-TH";
    case AlgoTag::Gpomdp: return "GPOMDP";
    case AlgoTag::MiwPg: return "MIW-PG";
    case AlgoTag::BhPg: return "BH-PG";
    case AlgoTag::PgpeRpg: return "PGPE-RPG";
  }
  return "?";
}

std::string to_string(OutputSelection sel) {
  return sel == OutputSelection::Best ? "BEST" : "UNIFORM-RANDOM";
}

void RunConfig::validate() const {
  if (iterations < 1) throw ConfigError(name + ": iterations must be >= 1");
  if (batch < 1) throw ConfigError(name + ": batch must be >= 1");
  if (window < 0) throw ConfigError(name + ": window must be >= 0 (0 = full reuse)");
  if (sigma2 <= 0.0) throw ConfigError(name + ": sigma2 must be positive");
  if (gamma < 0.0 || gamma > 1.0) throw ConfigError(name + ": gamma must lie in [0,1]");
  if (step <= 0.0) throw ConfigError(name + ": step must be positive");
  const bool theory = schedule != ScheduleTag::Adaptive || algo == AlgoTag::RpgTh;
  if (theory && divergence_bound <= 0.0)
    throw ConfigError(name + ": D must be positive for theory schedules");
  if (schedule == ScheduleTag::Theory && divergence_bound < 1.0)
    throw ConfigError(name + ": D must be >= 1 for the full theory schedule");
  if (delta <= 0.0 || delta >= 1.0) throw ConfigError(name + ": delta must lie in (0,1)");
}

namespace {

constexpr std::uint64_t kOutputDrawTag = 0x6f7574ULL;  // stream tag for theta_out draw

struct CoeffSummary {
  double mean_alpha = 0.0;
  double mean_lambda = 0.0;
  double mean_dhat = 0.0;
};

MpmCoefficients build_coefficients(const RunConfig& config,
                                   const LinearGaussianPolicy& current,
                                   const WindowBuffer& buffer, CoeffSummary& summary,
                                   bool& clamp_warned) {
  const int omega_k = buffer.window_len();
  const ScheduleTag tag =
      config.algo == AlgoTag::RpgTh ? ScheduleTag::TheorySimple : config.schedule;
  MpmCoefficients coeffs;
  switch (tag) {
    case ScheduleTag::Adaptive: {
      std::vector<double> dhat(omega_k);
      for (int i = 0; i < omega_k; ++i)
        dhat[i] = chi2_hat_cached(current, buffer.entries()[i].batch);
      // The newest entry is the current iterate; identical means give an
      // exact zero, which adaptive_schedule requires.
      coeffs = adaptive_schedule(dhat, config.batch, omega_k);
      double acc = 0.0;
      for (double d : dhat) acc += d;
      summary.mean_dhat = acc / omega_k;
      break;
    }
    case ScheduleTag::Theory:
      coeffs = theory_schedule(current.param_dim(), config.delta, config.divergence_bound,
                               config.batch, omega_k);
      summary.mean_dhat = 0.0;
      break;
    case ScheduleTag::TheorySimple:
      coeffs = simple_theory_schedule(config.divergence_bound, config.batch, omega_k);
      summary.mean_dhat = 0.0;
      break;
  }
  summary.mean_alpha = coeffs.mean_alpha();
  summary.mean_lambda = coeffs.mean_lambda();
  if (coeffs.lambda_clamped && !clamp_warned) {
    std::cerr << "warning: " << config.name
              << ": power-mean coefficient clamped to 1 (batch too small for schedule "
              << to_string(coeffs.tag) << ")\n";
    clamp_warned = true;
  }
  return coeffs;
}

LearningCurve run_action_based(const RunConfig& config, std::uint64_t seed) {
  auto env = make_environment(config.env, config.horizon, config.gamma);
  const EnvironmentSpec& spec = env->spec();
  const int d = spec.state_dim * spec.action_dim;

  Vec theta = Vec::Constant(d, config.theta_init);
  LinearGaussianPolicy policy(theta, spec.state_dim, spec.action_dim, config.sigma2);
  Optimizer opt(config.optimizer, config.step, d);

  const bool bh = config.algo == AlgoTag::BhPg;
  const int capacity = config.algo == AlgoTag::Gpomdp ? 1 : config.window;
  WindowBuffer buffer(capacity,
                      bh ? BufferMode::RetainPolicies : BufferMode::TrajectoriesOnly);

  // Draw the uniform output iterate up front so its parameter can be
  // captured in passing.
  RngStream out_rng = RngStream::derive(seed, kOutputDrawTag);
  const int uniform_pick =
      1 + static_cast<int>(out_rng.uniform() * config.iterations);

  LearningCurve curve;
  curve.seed = seed;
  curve.selection = config.output;
  Vec best_theta = theta;
  double best_return = -std::numeric_limits<double>::infinity();
  Vec uniform_theta = theta;
  bool clamp_warned = false;
  long collected = 0;

  for (int k = 1; k <= config.iterations; ++k) {
    std::vector<Trajectory> batch =
        collect_batch(*env, policy, config.batch, seed, k, config.threads);
    collected += config.batch;
    double mean_return = 0.0;
    for (const auto& traj : batch) mean_return += undiscounted_return(traj);
    mean_return /= config.batch;

    buffer.push(k, policy, std::move(batch));

    CoeffSummary summary;
    GradientEstimate est;
    bool skipped = false;
    try {
      switch (config.algo) {
        case AlgoTag::Gpomdp:
        case AlgoTag::Rpg:
        case AlgoTag::RpgTh: {
          const MpmCoefficients coeffs =
              build_coefficients(config, policy, buffer, summary, clamp_warned);
          est = mpm_estimate(policy, buffer, coeffs, config.gamma, config.inner);
          break;
        }
        case AlgoTag::MiwPg:
          summary.mean_alpha = 1.0 / buffer.window_len();
          est = miw_constant_estimate(policy, buffer, config.gamma, config.inner);
          break;
        case AlgoTag::BhPg:
          est = bh_estimate(policy, buffer, config.gamma, config.inner);
          break;
        case AlgoTag::PgpeRpg:
          throw Fault("unreachable");
      }
    } catch (const Fault& fault) {
      if (config.algo != AlgoTag::MiwPg)
        throw Fault("iteration " + std::to_string(k) + ": " + fault.what());
      // Divergence-prone baseline: drop the update, keep the parameter.
      skipped = true;
      ++curve.skipped_iterations;
      est.vector = Vec::Zero(d);
    }

    IterationRecord row;
    row.iteration = k;
    row.omega_k = buffer.window_len();
    row.collected = collected;
    row.used = buffer.total_trajectories();
    row.mean_return = mean_return;
    row.grad_norm = est.vector.size() ? est.vector.norm() : 0.0;
    row.mean_alpha = summary.mean_alpha;
    row.mean_lambda = summary.mean_lambda;
    row.mean_dhat = summary.mean_dhat;
    row.likelihood_evals = buffer.eval_count();
    curve.rows.push_back(row);

    if (mean_return > best_return) {
      best_return = mean_return;
      best_theta = theta;
    }
    if (k == uniform_pick) uniform_theta = theta;

    if (!skipped) {
      theta = opt.ascend(theta, est.vector);
      policy = LinearGaussianPolicy(theta, spec.state_dim, spec.action_dim, config.sigma2);
    }
  }

  curve.theta_out =
      config.output == OutputSelection::Best ? best_theta : uniform_theta;
  return curve;
}

LearningCurve run_parameter_based(const RunConfig& config, std::uint64_t seed) {
  auto env = make_environment(config.env, config.horizon, config.gamma);
  const EnvironmentSpec& spec = env->spec();
  const int d = spec.state_dim * spec.action_dim;

  Vec xi = Vec::Constant(d, config.theta_init);
  GaussianHyperpolicy hyper(xi, config.sigma2);
  Optimizer opt(config.optimizer, config.step, d);

  std::vector<HyperWindowEntry> window;
  RngStream out_rng = RngStream::derive(seed, kOutputDrawTag);
  const int uniform_pick =
      1 + static_cast<int>(out_rng.uniform() * config.iterations);

  LearningCurve curve;
  curve.seed = seed;
  curve.selection = config.output;
  Vec best_xi = xi;
  double best_return = -std::numeric_limits<double>::infinity();
  Vec uniform_xi = xi;
  bool clamp_warned = false;
  long collected = 0;

  for (int k = 1; k <= config.iterations; ++k) {
    HyperWindowEntry entry;
    entry.iterate = k;
    entry.hyper_mean = xi;
    entry.theta_samples.resize(config.batch);
    entry.returns.resize(config.batch);
    entry.behavior_logliks.resize(config.batch);
    std::vector<double> raw_returns(config.batch);
    parallel_for(config.batch, config.threads, [&](int j) {
      RngStream rng = RngStream::derive(seed, 0x706770ULL, k, j);
      Vec theta_j = hyper.sample(rng);
      DeterministicLinearPolicy inner_policy(theta_j, spec.state_dim, spec.action_dim);
      Trajectory traj = rollout(*env, inner_policy, rng, k);
      entry.returns[j] = discounted_return(traj, config.gamma);
      raw_returns[j] = undiscounted_return(traj);
      entry.behavior_logliks[j] = hyper.logdensity(theta_j);
      entry.theta_samples[j] = std::move(theta_j);
    });
    collected += config.batch;
    double mean_return = 0.0;
    for (double r : raw_returns) mean_return += r;
    mean_return /= config.batch;

    window.push_back(std::move(entry));
    if (config.window > 0 && static_cast<int>(window.size()) > config.window)
      window.erase(window.begin());
    const int omega_k = static_cast<int>(window.size());

    CoeffSummary summary;
    MpmCoefficients coeffs;
    const ScheduleTag tag =
        config.algo == AlgoTag::RpgTh ? ScheduleTag::TheorySimple : config.schedule;
    if (tag == ScheduleTag::Adaptive) {
      // Chi-square divergence between Gaussian hyperpolicies in closed form.
      std::vector<double> dhat(omega_k);
      for (int i = 0; i < omega_k; ++i) {
        const double d2 =
            gaussian_state_dalpha(xi, window[i].hyper_mean, config.sigma2, 2.0);
        dhat[i] = std::max(d2 - 1.0, 0.0);
      }
      coeffs = adaptive_schedule(dhat, config.batch, omega_k);
      double acc = 0.0;
      for (double v : dhat) acc += v;
      summary.mean_dhat = acc / omega_k;
    } else if (tag == ScheduleTag::Theory) {
      coeffs = theory_schedule(d, config.delta, config.divergence_bound, config.batch,
                               omega_k);
    } else {
      coeffs = simple_theory_schedule(config.divergence_bound, config.batch, omega_k);
    }
    summary.mean_alpha = coeffs.mean_alpha();
    summary.mean_lambda = coeffs.mean_lambda();
    if (coeffs.lambda_clamped && !clamp_warned) {
      std::cerr << "warning: " << config.name << ": power-mean coefficient clamped to 1\n";
      clamp_warned = true;
    }

    GradientEstimate est;
    try {
      est = pgpe_mpm_estimate(hyper, window, coeffs);
    } catch (const Fault& fault) {
      throw Fault("iteration " + std::to_string(k) + ": " + fault.what());
    }

    IterationRecord row;
    row.iteration = k;
    row.omega_k = omega_k;
    row.collected = collected;
    row.used = est.n_trajectories_used;
    row.mean_return = mean_return;
    row.grad_norm = est.vector.norm();
    row.mean_alpha = summary.mean_alpha;
    row.mean_lambda = summary.mean_lambda;
    row.mean_dhat = summary.mean_dhat;
    row.likelihood_evals = est.n_trajectories_used;  // one hyper-density per sample
    curve.rows.push_back(row);

    if (mean_return > best_return) {
      best_return = mean_return;
      best_xi = xi;
    }
    if (k == uniform_pick) uniform_xi = xi;

    xi = opt.ascend(xi, est.vector);
    hyper = hyper.with_mean(xi);
  }

  curve.theta_out = config.output == OutputSelection::Best ? best_xi : uniform_xi;
  return curve;
}

}  // namespace

LearningCurve run_algorithm(const RunConfig& config, std::uint64_t seed) {
  config.validate();
  return config.algo == AlgoTag::PgpeRpg ? run_parameter_based(config, seed)
                                         : run_action_based(config, seed);
}

}  // namespace pgreuse
