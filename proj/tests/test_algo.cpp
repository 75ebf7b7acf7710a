#include <doctest.h>

#include <cmath>

#include "pgreuse/algo.hpp"

using namespace pgreuse;

namespace {

RunConfig quad_config(AlgoTag algo) {
  RunConfig cfg;
  cfg.name = "t";
  cfg.env = "quadbowl";
  cfg.horizon = 1;
  cfg.gamma = 1.0;
  cfg.sigma2 = 0.25;
  cfg.theta_init = 1.0;
  cfg.algo = algo;
  cfg.iterations = 12;
  cfg.batch = 4;
  cfg.window = 3;
  cfg.step = 0.05;
  return cfg;
}

bool rows_identical(const LearningCurve& a, const LearningCurve& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (size_t i = 0; i < a.rows.size(); ++i) {
    const IterationRecord &x = a.rows[i], &y = b.rows[i];
    if (x.mean_return != y.mean_return || x.grad_norm != y.grad_norm ||
        x.collected != y.collected || x.used != y.used ||
        x.likelihood_evals != y.likelihood_evals)
      return false;
  }
  return (a.theta_out.array() == b.theta_out.array()).all();
}

}  // namespace

TEST_CASE("runs are deterministic in (config, seed)") {
  const RunConfig cfg = quad_config(AlgoTag::Rpg);
  const LearningCurve a = run_algorithm(cfg, 7);
  const LearningCurve b = run_algorithm(cfg, 7);
  CHECK(rows_identical(a, b));
  const LearningCurve c = run_algorithm(cfg, 8);
  CHECK_FALSE(rows_identical(a, c));
}

TEST_CASE("on-policy baseline is the window-1 power-mean run, bit for bit") {
  RunConfig gpomdp = quad_config(AlgoTag::Gpomdp);
  gpomdp.window = 1;
  RunConfig rpg1 = quad_config(AlgoTag::Rpg);
  rpg1.window = 1;
  CHECK(rows_identical(run_algorithm(gpomdp, 5), run_algorithm(rpg1, 5)));
}

TEST_CASE("trajectory accounting") {
  SUBCASE("partial reuse") {
    const RunConfig cfg = quad_config(AlgoTag::Rpg);
    const LearningCurve curve = run_algorithm(cfg, 3);
    REQUIRE(curve.rows.size() == 12);
    for (int k = 1; k <= 12; ++k) {
      const IterationRecord& r = curve.rows[k - 1];
      const int omega_k = std::min(3, k);
      CHECK(r.collected == 4L * k);
      CHECK(r.used == 4L * omega_k);
      CHECK(r.omega_k == omega_k);
    }
  }
  SUBCASE("full reuse via the window = 0 sentinel") {
    RunConfig cfg = quad_config(AlgoTag::Rpg);
    cfg.window = 0;
    const LearningCurve curve = run_algorithm(cfg, 3);
    CHECK(curve.rows.back().used == 4L * 12);
    CHECK(curve.rows.back().omega_k == 12);
  }
  SUBCASE("counters match the estimator paths") {
    for (AlgoTag algo : {AlgoTag::Rpg, AlgoTag::MiwPg, AlgoTag::BhPg}) {
      const RunConfig cfg = quad_config(algo);
      const LearningCurve curve = run_algorithm(cfg, 3);
      for (const IterationRecord& r : curve.rows) {
        const long expect = algo == AlgoTag::BhPg ? 2L * r.used : r.used;
        CHECK(r.likelihood_evals == expect);
      }
    }
  }
}

TEST_CASE("uniform output selection is reproducible") {
  RunConfig cfg = quad_config(AlgoTag::Rpg);
  cfg.output = OutputSelection::UniformRandom;
  const LearningCurve a = run_algorithm(cfg, 9);
  const LearningCurve b = run_algorithm(cfg, 9);
  CHECK((a.theta_out.array() == b.theta_out.array()).all());
  CHECK(a.selection == OutputSelection::UniformRandom);
  // With one iteration the draw can only pick the initial parameter.
  cfg.iterations = 1;
  CHECK(run_algorithm(cfg, 9).theta_out[0] == doctest::Approx(1.0));
}

TEST_CASE("quadratic bowl is learned") {
  // J(theta) = -E[(theta + noise)^2]; the optimum is theta = 0.
  RunConfig cfg = quad_config(AlgoTag::Rpg);
  cfg.iterations = 300;
  cfg.batch = 8;
  cfg.window = 4;
  cfg.optimizer = OptimizerMode::Adam;
  cfg.step = 0.02;
  const LearningCurve curve = run_algorithm(cfg, 11);
  CHECK(std::abs(curve.theta_out[0]) <= 0.15);
  // Mean return over the last quarter beats the first iteration.
  double late = 0.0;
  for (size_t i = curve.rows.size() - 75; i < curve.rows.size(); ++i)
    late += curve.rows[i].mean_return;
  late /= 75;
  CHECK(late > curve.rows.front().mean_return);
}

TEST_CASE("parameter-based variant converges on the quadratic bowl") {
  RunConfig cfg = quad_config(AlgoTag::PgpeRpg);
  cfg.iterations = 200;
  cfg.batch = 16;
  cfg.window = 4;
  cfg.sigma2 = 0.02;
  cfg.optimizer = OptimizerMode::Adam;
  cfg.step = 0.03;
  const LearningCurve curve = run_algorithm(cfg, 13);
  CHECK(std::abs(curve.theta_out[0]) <= 0.05);
  for (const IterationRecord& r : curve.rows)
    CHECK(r.used == 16L * r.omega_k);
}

TEST_CASE("theory-coefficient variant runs with a pinned divergence bound") {
  RunConfig cfg = quad_config(AlgoTag::RpgTh);
  cfg.divergence_bound = 2.0;
  const LearningCurve curve = run_algorithm(cfg, 17);
  REQUIRE(curve.rows.size() == 12);
  // Uniform mixture coefficients and the pinned-D power-mean coefficient.
  const IterationRecord& r = curve.rows.back();
  CHECK(r.mean_alpha == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.mean_lambda ==
        doctest::Approx(std::sqrt(1.0 / (2.0 * 4.0 * 3.0))).epsilon(1e-12));
  CHECK(r.mean_dhat == 0.0);
}

TEST_CASE("config validation") {
  RunConfig cfg = quad_config(AlgoTag::Rpg);
  cfg.iterations = 0;
  CHECK_THROWS_AS(run_algorithm(cfg, 1), ConfigError);
  cfg = quad_config(AlgoTag::Rpg);
  cfg.window = -1;
  CHECK_THROWS_AS(run_algorithm(cfg, 1), ConfigError);
  cfg = quad_config(AlgoTag::RpgTh);
  cfg.divergence_bound = 0.0;
  CHECK_THROWS_AS(run_algorithm(cfg, 1), ConfigError);
}
