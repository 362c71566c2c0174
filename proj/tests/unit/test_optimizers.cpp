#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gbench/error.hpp"
#include "gbench/optimizers.hpp"
#include "gbench/problems/catalog.hpp"
#include "gbench/stats.hpp"

using namespace gbench;

namespace {

bool same_result(const RunTrace& a, const RunTrace& b) {
  return a.problem_id == b.problem_id && a.method_id == b.method_id && a.seed == b.seed && a.budget == b.budget &&
         a.evaluations == b.evaluations && a.stage_best == b.stage_best && a.checkpoints == b.checkpoints &&
         a.truncated == b.truncated && a.failed == b.failed;
}

Problem quadratic_1d(double centre) {
  return Problem("quad-1D", "TEST", {-5.0}, {5.0},
                 [centre](std::span<const double> x) { return (x[0] - centre) * (x[0] - centre); });
}

Problem separable(std::vector<double> centre) {
  const std::size_t n = centre.size();
  return Problem("sep", "TEST", std::vector<double>(n, -5.0), std::vector<double>(n, 5.0),
                 [centre](std::span<const double> x) {
                   double s = 0.0;
                   for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - centre[i]) * (x[i] - centre[i]);
                   return s;
                 });
}

std::string fixture(const char* name) { return std::string("python3 ") + GBENCH_FIXTURE_DIR + "/" + name; }

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("registry defaults and validation") {
  const auto ids = builtin_methods();
  CHECK(ids == std::vector<std::string>{"RS", "NM", "MSGD", "PSO", "LSHADE"});
  const auto nm = make_optimizer("NM");
  CHECK(nm.scope == Scope::Local);
  CHECK(nm.parameters.at("step_init") == 0.4);
  const auto msgd = make_optimizer("MSGD");
  CHECK(msgd.parameters.at("divisions") == 10);
  CHECK(msgd.parameters.at("base") == 4);
  CHECK(msgd.parameters.at("scale_max") == 15);
  const auto pso = make_optimizer("PSO");
  CHECK(pso.parameters.at("inertia") == 0.72);
  CHECK(pso.parameters.at("cognitive") == 1.0);
  CHECK(pso.parameters.at("social") == 1.0);
  const auto de = make_optimizer("LSHADE", {{"p_best", 0.2}});
  CHECK(de.parameters.at("archive_rate") == 2.6);
  CHECK(de.parameters.at("memory_size") == 6);
  CHECK(de.parameters.at("p_best") == 0.2);
  CHECK(make_optimizer("RS").scope == Scope::Global);

  try {
    make_optimizer("CMAES");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownMethod);
  }
  try {
    make_optimizer("PSO", {{"gravity", 1.0}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
  CHECK_THROWS_AS(make_optimizer("MSGD", {{"divisions", 2.5}}), Error);
  CHECK_THROWS_AS(make_optimizer("LSHADE", {{"pop_min", 2}}), Error);

  const Problem p = find_problem("sphere-10D");
  CHECK(minimum_budget(make_optimizer("RS"), p) == 10);
  CHECK(minimum_budget(make_optimizer("NM"), p) == 11);
  CHECK(minimum_budget(make_optimizer("PSO"), p) == 10);
  CHECK(minimum_budget(make_optimizer("LSHADE"), p) == 50);
}

TEST_CASE("built-ins are deterministic and respect the budget") {
  const Problem p = find_problem("ripple-10D");
  for (const auto& id : builtin_methods()) {
    CAPTURE(id);
    const auto spec = make_optimizer(id);
    const RunTrace a = optimize(spec, p, 1500, 77);
    const RunTrace b = optimize(spec, p, 1500, 77);
    const RunTrace c = optimize(spec, p, 1500, 78);
    CHECK(same_result(a, b));
    CHECK_FALSE(a.checkpoints == c.checkpoints);
    CHECK(a.evaluations == 1500);
    CHECK(a.budget == 1500);
    CHECK_FALSE(a.failed);
    CHECK(a.method_id == id);
    CHECK(a.problem_id == "ripple-10D");
    // Best-so-far is strictly decreasing and agrees with the stage values.
    for (std::size_t k = 1; k < a.checkpoints.size(); ++k) {
      CHECK(a.checkpoints[k].fitness < a.checkpoints[k - 1].fitness);
      CHECK(a.checkpoints[k].evaluation > a.checkpoints[k - 1].evaluation);
    }
    CHECK(a.at(Stage::Tenth) >= a.at(Stage::Half));
    CHECK(a.at(Stage::Half) >= a.at(Stage::Full));
    CHECK(a.at(Stage::Tenth) == best_within(a.checkpoints, 150));
    CHECK(a.at(Stage::Half) == best_within(a.checkpoints, 750));
    CHECK(a.best() == a.checkpoints.back().fitness);
    CHECK(a.wall_total >= a.wall_eval);
  }
}

TEST_CASE("every evaluated point is inside the bounds") {
  auto outside = std::make_shared<std::atomic<int>>(0);
  // Optimum sits in a corner, so every method pushes against the bounds.
  const Problem corner("corner", "TEST", std::vector<double>(4, -1.0), std::vector<double>(4, 1.0),
                       [outside](std::span<const double> x) {
                         double s = 0.0;
                         for (double v : x) {
                           if (v < -1.0 || v > 1.0) ++*outside;
                           s += (v - 3.0) * (v - 3.0);
                         }
                         return s;
                       });
  for (const auto& id : builtin_methods()) {
    CAPTURE(id);
    const RunTrace t = optimize(make_optimizer(id), corner, 2000, 5);
    CHECK(t.evaluations == 2000);
    CHECK(t.best() >= 16.0);
    if (id != "RS") CHECK(t.best() < 16.01);
  }
  CHECK(*outside == 0);
}

TEST_CASE("objective harness") {
  const Problem p = find_problem("sphere-3D");
  Objective obj(p, 3);
  std::vector<double> x{10.0, 0.0, -10.0};
  CHECK(obj(x) == 50.0);  // clamped to (5, 0, -5)
  CHECK(obj.best_point()[0] == 5.0);
  CHECK(obj(std::vector<double>{1.0, 0.0, 0.0}) == 1.0);
  CHECK(obj(std::vector<double>{2.0, 0.0, 0.0}) == 4.0);
  CHECK(obj.exhausted());
  CHECK_THROWS_AS(obj(std::vector<double>{0.0, 0.0, 0.0}), BudgetExhausted);
  CHECK(obj.truncated());
  CHECK(obj.used() == 3);
  Objective fresh(p, 3);
  CHECK_THROWS_AS(fresh(std::vector<double>{0.0, 0.0}), Error);
  CHECK(fresh.used() == 0);
  const RunTrace t = obj.trace("X", 1, 0.0);
  CHECK(t.checkpoints.size() == 2);
  CHECK(t.best() == 1.0);
  CHECK(t.truncated);

  const Problem nan_problem("nan", "TEST", {0.0}, {1.0},
                            [](std::span<const double> x) { return x[0] < 0.5 ? NAN : x[0]; });
  Objective o2(nan_problem, 2);
  CHECK(std::isinf(o2(std::vector<double>{0.1})));
  CHECK(o2(std::vector<double>{0.7}) == 0.7);
  CHECK(stage_evaluation(1000, Stage::Tenth) == 100);
  CHECK(stage_evaluation(1000, Stage::Half) == 500);
  CHECK(stage_evaluation(5, Stage::Tenth) == 1);
}

TEST_CASE("random search consumes whole batches") {
  const Problem p = find_problem("sphere-10D");
  const RunTrace t = optimize(make_optimizer("RS"), p, 10, 3);
  CHECK(t.evaluations == 10);
  CHECK_FALSE(t.truncated);
  const RunTrace odd = optimize(make_optimizer("RS"), p, 25, 3);
  CHECK(odd.evaluations == 25);
  // The first batch is the same whatever the budget.
  CHECK(best_within(odd.checkpoints, 10) == t.best());
}

TEST_CASE("Nelder-Mead solves a 1-D quadratic and restarts") {
  const Problem q = quadratic_1d(1.234567);
  Objective obj(q, 200);
  Rng rng(9);
  nelder_mead(obj, rng);
  CHECK(std::abs(obj.best_point()[0] - 1.234567) < 1e-6);
  CHECK(obj.best() < 1e-12);

  const Problem s = find_problem("sphere-3D");
  Objective big(s, 50000);
  Rng rng2(9);
  const auto stats = nelder_mead(big, rng2);
  CHECK(stats.restarts >= 1);
  CHECK(big.used() == 50000);
}

TEST_CASE("grid descent reaches the finest grid") {
  const std::vector<double> centre{0.1234567, -2.7654321, 3.3333333};
  const Problem p = separable(centre);
  Objective obj(p, 20000);
  Rng rng(4);
  GridDescentParams params;
  const auto stats = grid_descent(obj, rng, params);
  const double h_finest = 10.0 / (10.0 * std::pow(4.0, 15));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(obj.best_point()[i] - centre[i]) <= h_finest);
  }
  CHECK(stats.restarts >= 1);
}

TEST_CASE("particle swarm sizes") {
  ParticleSwarmParams params;
  CHECK(params.resolved_swarm(3) == 10);
  CHECK(params.resolved_swarm(50) == 50);
  params.swarm_size = 17;
  CHECK(params.resolved_swarm(3) == 17);
}

TEST_CASE("LSHADE population schedule and archive bound") {
  LshadeParams params;
  CHECK(params.resolved_pop_init(10) == 50);
  CHECK(params.resolved_pop_init(3) == 30);
  CHECK(lshade_population(50, 4, 0, 10000) == 50);
  CHECK(lshade_population(50, 4, 5000, 10000) == 27);
  CHECK(lshade_population(50, 4, 10000, 10000) == 4);

  const Problem p = find_problem("sphere-10D");
  Objective obj(p, 10000);
  Rng rng(1);
  std::size_t last_population = 0, previous = 1000;
  bool bounded = true, shrinking = true;
  const auto stats = lshade(obj, rng, params, [&](const LshadeGeneration& g) {
    bounded = bounded && g.archive <= g.archive_capacity &&
              g.archive_capacity == static_cast<std::size_t>(std::lround(2.6 * g.population));
    shrinking = shrinking && g.population <= previous;
    previous = g.population;
    last_population = g.population;
  });
  CHECK(bounded);
  CHECK(shrinking);
  CHECK(last_population == 4);
  CHECK(stats.final_population == 4);
  CHECK(obj.used() == 10000);
  CHECK(obj.best() < 1e-6);
}

TEST_CASE("sphere-10D thresholds at 1e4 evaluations") {
  const Problem p = find_problem("sphere-10D");
  CHECK(optimize(make_optimizer("LSHADE"), p, 10000, 21).best() < 1e-6);
  CHECK(optimize(make_optimizer("PSO"), p, 10000, 21).best() < 1e-3);
  CHECK(optimize(make_optimizer("NM"), p, 10000, 21).best() < 1e-6);
}

TEST_CASE("external: echo method") {
  const Problem p = find_problem("sphere-3D");
  const RunTrace t = external_run(fixture("echo_optimizer.py"), p, 20, 1, "echo");
  CHECK_FALSE(t.failed);
  CHECK(t.failure.empty());
  CHECK(t.evaluations == 20);
  CHECK(t.method_id == "echo");
  REQUIRE(t.checkpoints.size() == 1);
  CHECK(t.checkpoints[0].evaluation == 1);
  CHECK(t.best() == 0.0);
  CHECK(t.at(Stage::Tenth) == 0.0);
}

TEST_CASE("external: protocol violations fail the run") {
  const Problem p = find_problem("sphere-3D");
  const RunTrace over = external_run(fixture("overdraw_optimizer.py"), p, 5, 1);
  CHECK(over.failed);
  CHECK(over.failure.find("overdraw") != std::string::npos);
  CHECK(over.evaluations == 5);

  const RunTrace crash = external_run(fixture("crash_optimizer.py"), p, 10, 1);
  CHECK(crash.failed);
  CHECK(crash.evaluations == 3);
  CHECK_FALSE(crash.failure.empty());

  const RunTrace garbage = external_run(fixture("garbage_optimizer.py"), p, 10, 1);
  CHECK(garbage.failed);
  CHECK(garbage.failure.find("HELLO") != std::string::npos);

  const RunTrace missing = external_run("/nonexistent/optimizer", p, 10, 1);
  CHECK(missing.failed);

  const auto spec = make_external("echo", fixture("echo_optimizer.py"));
  CHECK(spec.is_external());
  CHECK(minimum_budget(spec, p) == 1);
  CHECK_FALSE(optimize(spec, p, 7, 2).failed);
}

TEST_CASE("external random search matches the built-in distribution") {
  const Problem p = find_problem("sphere-3D");
  std::vector<double> external, builtin;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const RunTrace e = external_run(fixture("rs_optimizer.py"), p, 60, 1000 + s);
    REQUIRE_FALSE(e.failed);
    external.push_back(e.best());
    builtin.push_back(optimize(make_optimizer("RS"), p, 60, 5000 + s).best());
  }
  // Critical value of the two-sample test at alpha 0.01 for n = m = 100.
  const double critical = 1.628 * std::sqrt(2.0 / 100.0);
  CHECK(ks_statistic(external, builtin) < critical);
}
