#include <filesystem>
#include <iostream>

#include "pgreuse/harness.hpp"
#include "pgreuse/rollout.hpp"

namespace pgreuse {

SuiteResult run_suite(const ExperimentSuite& suite) {
  namespace fs = std::filesystem;
  fs::create_directories(suite.out_dir);

  struct Job {
    int run_idx;
    int seed_idx;
  };
  std::vector<Job> jobs;
  for (size_t r = 0; r < suite.runs.size(); ++r)
    for (size_t s = 0; s < suite.seeds.size(); ++s)
      jobs.push_back({static_cast<int>(r), static_cast<int>(s)});

  SuiteResult result;
  result.curves.resize(suite.runs.size());
  for (auto& v : result.curves) v.resize(suite.seeds.size());
  std::vector<int> job_failed(jobs.size(), 0);

  // With several jobs the parallelism lives at the job level and each job
  // rolls out single-threaded; a lone job gets the threads for its rollouts.
  const bool job_level = jobs.size() > 1;
  const int job_threads = job_level ? suite.threads : 1;

  parallel_for(static_cast<int>(jobs.size()), job_threads, [&](int idx) {
    const Job& job = jobs[idx];
    RunConfig cfg = suite.runs[job.run_idx];
    cfg.threads = job_level ? 1 : suite.threads;
    const std::uint64_t seed = suite.seeds[job.seed_idx];
    try {
      result.curves[job.run_idx][job.seed_idx] = run_algorithm(cfg, seed);
    } catch (const std::exception& e) {
      std::cerr << "error: run '" << cfg.name << "' seed " << seed << " failed: "
                << e.what() << '\n';
      job_failed[idx] = 1;
    }
  });

  for (int f : job_failed) result.failed_jobs += f;

  for (size_t r = 0; r < suite.runs.size(); ++r) {
    std::vector<LearningCurve> ok;
    for (size_t s = 0; s < suite.seeds.size(); ++s) {
      const LearningCurve& c = result.curves[r][s];
      if (c.rows.empty()) continue;  // failed job
      const std::string path = suite.out_dir + "/" + suite.runs[r].name + "_seed" +
                               std::to_string(suite.seeds[s]) + ".csv";
      write_run_csv_file(path, c);
      result.csv_paths.push_back(path);
      ok.push_back(c);
    }
    if (ok.empty()) continue;
    AggregateCurve agg = aggregate_runs(suite.runs[r].name, ok);
    const std::string agg_path = suite.out_dir + "/" + suite.runs[r].name + "_agg.csv";
    write_aggregate_csv_file(agg_path, agg);
    result.csv_paths.push_back(agg_path);
    result.aggregates.push_back(std::move(agg));
  }

  if (!result.aggregates.empty())
    emit_plot(result.aggregates, suite.out_dir + "/suite.svg");
  return result;
}

}  // namespace pgreuse
