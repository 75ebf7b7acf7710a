#ifndef PGREUSE_HARNESS_HPP
#define PGREUSE_HARNESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "pgreuse/algo.hpp"

namespace pgreuse {

/// A batch of runs sharing an environment, each executed once per seed and
/// aggregated across seeds (mean with a normal-approximation 95% interval).
struct ExperimentSuite {
  std::vector<RunConfig> runs;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "results";
  int threads = 1;
};

/// Parse the flat key-value suite format (see README for the grammar).
/// Unknown keys, missing required keys and malformed values are rejected
/// with the offending line number.
ExperimentSuite parse_config(const std::string& path);
ExperimentSuite parse_config_text(const std::string& text, const std::string& origin);

struct AggregatePoint {
  double x = 0.0;  // cumulative collected trajectories
  double mean = 0.0;
  double se = 0.0;
  double lo = 0.0;  // mean - 1.96 se
  double hi = 0.0;  // mean + 1.96 se
  int n = 0;
};

struct AggregateCurve {
  std::string name;
  std::vector<AggregatePoint> points;
};

/// Mean return across seeds per iteration. All curves must share the
/// iteration grid (same batch size and iteration count).
AggregateCurve aggregate_runs(const std::string& name,
                              const std::vector<LearningCurve>& curves);

void write_run_csv(std::ostream& out, const LearningCurve& curve);
void write_run_csv_file(const std::string& path, const LearningCurve& curve);
void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve);
void write_aggregate_csv_file(const std::string& path, const AggregateCurve& curve);
AggregateCurve read_aggregate_csv(const std::string& path);

struct SuiteResult {
  std::vector<AggregateCurve> aggregates;                 // one per run config
  std::vector<std::vector<LearningCurve>> curves;         // [run][seed]
  std::vector<std::string> csv_paths;
  int failed_jobs = 0;
};

/// Execute every (config, seed) job, write one CSV per job plus one
/// aggregate CSV per config and an overlay plot for the suite. Job faults
/// are recorded and the remaining jobs continue.
SuiteResult run_suite(const ExperimentSuite& suite);

/// Convergence speedup of `fast` relative to `baseline`: the factor s,
/// searched over [0.5, omega+1] in steps of 0.01, by which the fast curve's
/// trajectory axis must be stretched to best match the baseline curve
/// (least squares after piecewise-linear interpolation onto the baseline
/// grid). The interval comes from matching the pessimistic band of one
/// curve against the optimistic band of the other.
struct SpeedupResult {
  double factor = 1.0;
  double lo = 1.0;
  double hi = 1.0;
  double mse = 0.0;
  double grid_min = 0.5;
  double grid_max = 2.0;
  double grid_step = 0.01;
};

SpeedupResult speedup_factor(const AggregateCurve& fast, const AggregateCurve& baseline,
                             int omega);

/// Render aggregate curves as a self-contained SVG: one line per curve with
/// a shaded confidence band.
void emit_plot(const std::vector<AggregateCurve>& curves, const std::string& out_path,
               const std::string& x_label = "collected trajectories",
               const std::string& y_label = "mean return");

}  // namespace pgreuse

#endif  // PGREUSE_HARNESS_HPP
