#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pgreuse/harness.hpp"

using namespace pgreuse;

namespace {

const char* kTableConfig = R"(
# speedup comparison at a shared data budget
seeds = 101 102 103
out_dir = out

[run gpomdp-n32]
algo = GPOMDP
iterations = 20
batch = 32

[run reuse-n16-w2]
algo = RPG
iterations = 20
batch = 16
window = 2

[run reuse-n8-w4]
algo = RPG
iterations = 20
batch = 8
window = 4

[run reuse-n4-w8]
algo = RPG
iterations = 20
batch = 4
window = 8
)";

AggregateCurve synthetic_curve(const std::string& name, double x_scale, int n_points,
                               double se) {
  AggregateCurve c;
  c.name = name;
  for (int i = 1; i <= n_points; ++i) {
    AggregatePoint p;
    p.x = x_scale * 32.0 * i;
    p.mean = 200.0 * (1.0 - std::exp(-(32.0 * i) / 300.0));
    p.se = se;
    p.lo = p.mean - 1.96 * se;
    p.hi = p.mean + 1.96 * se;
    p.n = 10;
    c.points.push_back(p);
  }
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentSuite suite = parse_config_text(kTableConfig, "test");
  REQUIRE(suite.runs.size() == 4);
  CHECK(suite.seeds == std::vector<std::uint64_t>{101, 102, 103});
  CHECK(suite.out_dir == "out");
  CHECK(suite.runs[0].algo == AlgoTag::Gpomdp);
  CHECK(suite.runs[0].window == 1);
  CHECK(suite.runs[3].batch == 4);
  CHECK(suite.runs[3].window == 8);
  // Defaults from the environment block.
  CHECK(suite.runs[0].env == "cartpole");
  CHECK(suite.runs[0].gamma == 1.0);
  CHECK(suite.runs[0].output == OutputSelection::Best);
}

TEST_CASE("config rejection") {
  SUBCASE("missing batch size names the field") {
    const char* text = "seeds = 1\n[run a]\nalgo = RPG\niterations = 5\nwindow = 2\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "t"),
                         doctest::Contains("missing required key 'batch'"), ConfigError);
  }
  SUBCASE("unknown keys are rejected with their line") {
    const char* text = "seeds = 1\n[run a]\nalgo = RPG\nbatchsize = 4\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "t"), doctest::Contains("t:4"),
                         ConfigError);
  }
  SUBCASE("window 0 parses as full reuse") {
    const char* text =
        "seeds = 1\n[run a]\nalgo = RPG\niterations = 5\nbatch = 4\nwindow = 0\n";
    CHECK(parse_config_text(text, "t").runs[0].window == 0);
  }
  SUBCASE("environment must be shared") {
    const char* text =
        "seeds = 1\n"
        "[run a]\nenv = cartpole\nalgo = RPG\niterations = 5\nbatch = 4\nwindow = 2\n"
        "[run b]\nenv = quadbowl\nalgo = RPG\niterations = 5\nbatch = 4\nwindow = 2\n";
    CHECK_THROWS_AS(parse_config_text(text, "t"), ConfigError);
  }
  SUBCASE("duplicate keys are rejected") {
    const char* text = "seeds = 1\n[run a]\nalgo = RPG\nalgo = GPOMDP\n";
    CHECK_THROWS_AS(parse_config_text(text, "t"), ConfigError);
  }
  SUBCASE("theory schedules demand a divergence bound") {
    const char* text =
        "seeds = 1\n[run a]\nalgo = RPG-TH\niterations = 5\nbatch = 4\nwindow = 2\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "t"),
                         doctest::Contains("missing required key 'D'"), ConfigError);
  }
}

TEST_CASE("aggregation math") {
  LearningCurve a, b;
  a.seed = 1;
  b.seed = 2;
  for (int k = 1; k <= 3; ++k) {
    IterationRecord ra, rb;
    ra.iteration = rb.iteration = k;
    ra.collected = rb.collected = 8 * k;
    ra.mean_return = 100.0 + k;
    rb.mean_return = 104.0 + k;
    a.rows.push_back(ra);
    b.rows.push_back(rb);
  }
  const AggregateCurve agg = aggregate_runs("x", {a, b});
  REQUIRE(agg.points.size() == 3);
  CHECK(agg.points[0].x == 8.0);
  CHECK(agg.points[0].mean == doctest::Approx(103.0));
  // sd = |104-100|/sqrt(2)... sample sd of {101,105} is 2*sqrt(2); se = 2.
  CHECK(agg.points[0].se == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(agg.points[0].hi - agg.points[0].lo == doctest::Approx(2 * 1.96 * 2.0));
}

TEST_CASE("CSV round trips and stays byte-stable") {
  LearningCurve curve;
  curve.seed = 42;
  curve.selection = OutputSelection::Best;
  curve.theta_out = Vec::Zero(2);
  curve.theta_out << 0.125, -3.5;
  for (int k = 1; k <= 4; ++k) {
    IterationRecord r;
    r.iteration = k;
    r.collected = 8 * k;
    r.used = 8;
    r.mean_return = 1.0 / 3.0 + k;
    r.grad_norm = std::sqrt(2.0) * k;
    r.mean_alpha = 0.5;
    r.mean_lambda = 0.0625;
    r.mean_dhat = 0.001 * k;
    r.likelihood_evals = 8;
    curve.rows.push_back(r);
  }
  std::ostringstream a, b;
  write_run_csv(a, curve);
  write_run_csv(b, curve);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("iteration,collected,used,mean_return,grad_norm,mean_alpha,"
                     "mean_lambda,mean_dhat,likelihood_evals,seed") == 0);

  const AggregateCurve agg = aggregate_runs("roundtrip", {curve});
  const std::string path =
      (std::filesystem::temp_directory_path() / "pgreuse_agg_test.csv").string();
  write_aggregate_csv_file(path, agg);
  const AggregateCurve back = read_aggregate_csv(path);
  CHECK(back.name == "roundtrip");
  REQUIRE(back.points.size() == agg.points.size());
  for (size_t i = 0; i < back.points.size(); ++i) {
    CHECK(back.points[i].x == agg.points[i].x);
    CHECK(back.points[i].mean == agg.points[i].mean);
  }
  std::filesystem::remove(path);
}

TEST_CASE("speedup factor") {
  SUBCASE("identical curves give 1 within grid resolution") {
    const AggregateCurve c = synthetic_curve("a", 1.0, 40, 1.0);
    const SpeedupResult res = speedup_factor(c, c, 4);
    CHECK(res.factor == doctest::Approx(1.0).epsilon(0.011));
    CHECK(res.lo <= res.factor);
    CHECK(res.hi >= res.factor);
  }
  SUBCASE("doubling the baseline axis doubles the factor") {
    const AggregateCurve fast = synthetic_curve("fast", 1.0, 40, 1.0);
    const AggregateCurve slow = synthetic_curve("slow", 2.0, 40, 1.0);
    const SpeedupResult res = speedup_factor(fast, slow, 4);
    CHECK(res.factor == doctest::Approx(2.0).epsilon(0.02));
  }
  SUBCASE("disjoint supports are refused") {
    AggregateCurve far = synthetic_curve("far", 1.0, 10, 1.0);
    for (auto& p : far.points) p.x += 1e9;
    CHECK_THROWS_AS(speedup_factor(synthetic_curve("a", 1.0, 10, 1.0), far, 2), Fault);
  }
}

TEST_CASE("plots are written with legends and bands") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "pgreuse_plot_test.svg").string();
  emit_plot({synthetic_curve("alpha", 1.0, 20, 2.0), synthetic_curve("beta", 2.0, 20, 2.0)},
            path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string svg = ss.str();
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("polygon") != std::string::npos);
  CHECK(svg.find("alpha") != std::string::npos);
  CHECK(svg.find("beta") != std::string::npos);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(emit_plot({}, path), Fault);
}

TEST_CASE("suite runs write per-seed and aggregate files deterministically") {
  const std::string out =
      (std::filesystem::temp_directory_path() / "pgreuse_suite_test").string();
  std::filesystem::remove_all(out);
  ExperimentSuite suite;
  suite.seeds = {1, 2};
  suite.out_dir = out;
  suite.threads = 1;
  RunConfig cfg;
  cfg.name = "tiny";
  cfg.env = "quadbowl";
  cfg.horizon = 1;
  cfg.sigma2 = 0.25;
  cfg.theta_init = 1.0;
  cfg.algo = AlgoTag::Rpg;
  cfg.iterations = 6;
  cfg.batch = 4;
  cfg.window = 2;
  suite.runs = {cfg};

  const SuiteResult r1 = run_suite(suite);
  CHECK(r1.failed_jobs == 0);
  CHECK(std::filesystem::exists(out + "/tiny_seed1.csv"));
  CHECK(std::filesystem::exists(out + "/tiny_seed2.csv"));
  CHECK(std::filesystem::exists(out + "/tiny_agg.csv"));
  CHECK(std::filesystem::exists(out + "/suite.svg"));

  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string first = slurp(out + "/tiny_seed1.csv");
  run_suite(suite);
  CHECK(slurp(out + "/tiny_seed1.csv") == first);
  std::filesystem::remove_all(out);
}
