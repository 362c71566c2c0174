#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "gbench/engine.hpp"
#include "gbench/error.hpp"
#include "gbench/problems/catalog.hpp"
#include "gbench/serialization.hpp"
#include "gbench/store.hpp"

using namespace gbench;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gbench-unit-" + name);
  fs::remove_all(p);
  return p;
}

ConvergenceConfig quick_config() {
  ConvergenceConfig cfg;
  cfg.window = 20;
  cfg.min_runs = 30;
  cfg.max_runs = 60;
  return cfg;
}

BenchmarkPlan small_plan(const fs::path& out) {
  BenchmarkPlan plan;
  plan.problems = {{"sphere-3D", 300}, {"SP-single-5D", 500}};
  plan.methods = {make_optimizer("RS"), make_optimizer("NM"), make_optimizer("PSO")};
  plan.convergence = quick_config();
  plan.master_seed = 42;
  plan.output = out;
  return plan;
}

std::string slurp(const fs::path& p) { return read_file(p); }

}  // namespace

TEST_CASE("reals round-trip exactly") {
  for (double v : {0.1 + 0.2, 1e-300, -2.5e-310, 123456789.123456789, 1.0 / 3.0,
                   std::numeric_limits<double>::max(), std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()}) {
    const auto j = real_to_json(v);
    const auto back = real_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == v);
  }
  CHECK(std::isnan(real_from_json(real_to_json(NAN))));
  CHECK(real_to_json(INFINITY) == "inf");
}

TEST_CASE("store round-trip") {
  const fs::path root = fresh_dir("roundtrip");
  RunTrace t;
  t.problem_id = "sphere-3D";
  t.method_id = "PSO";
  t.seed = 0xfedcba9876543210ULL;
  t.budget = 100;
  t.evaluations = 100;
  t.stage_best = {0.30000000000000004, 1.0 / 3.0, 1e-17};
  t.checkpoints = {{1, 0.30000000000000004}, {40, 1.0 / 3.0 - 0.2}, {99, 1e-17}};
  t.wall_total = 0.0123;
  t.wall_eval = 0.001;
  RunTrace failed = t;
  failed.failed = true;
  failed.failure = "method exited with status 3";
  failed.stage_best.fill(std::numeric_limits<double>::infinity());
  failed.checkpoints.clear();

  ReferenceRecord r;
  r.problem = "sphere-3D";
  r.dimension = 3;
  r.budget = 100;
  r.known_best = 0.0;
  r.f_plus = 24.999999999999996;
  r.f_plus_trials = 2000;
  r.f_plus_range = 0.004;
  r.f_plus_best = 0.1;
  r.f_circ = {3.1, 1.7, 0.7000000000000001};
  r.f_circ_runs = 110;
  r.f_circ_converged = true;
  r.f_circ_best = 0.05;
  r.batch_size = 10;
  r.window = 50;
  r.eps = 0.01;
  r.min_runs = 100;
  r.min_trials = 2000;

  CellRecord c;
  c.problem = "sphere-3D";
  c.method = "PSO";
  c.status = CellStatus::MaxRuns;
  c.runs = 1000;
  c.median_g = 0.12345678901234568;
  c.range = 0.02;
  c.history = {{10, 0.1, 0.0}, {20, 0.2, 0.1}};
  c.batch_size = 10;
  c.window = 50;
  c.eps = 0.01;
  c.min_runs = 100;
  {
    ResultStore store(root);
    CHECK(store.empty());
    store.write_reference(r);
    const std::vector<RunTrace> runs{t, failed};
    store.append_runs("sphere-3D", "PSO", runs);
    store.write_cell(c);
    store.write_timing({"sphere-3D", 1.5e-8, 20000, false});
    store.write_plan({{"seed", 1}});
  }
  const ResultStore back(root);
  CHECK_FALSE(back.empty());
  REQUIRE(back.reference("sphere-3D") != nullptr);
  CHECK(to_json(*back.reference("sphere-3D")) == to_json(r));
  CHECK(back.reference("sphere-3D")->f_circ == r.f_circ);
  REQUIRE(back.runs("sphere-3D", "PSO").size() == 2);
  CHECK(back.runs("sphere-3D", "PSO")[0] == t);
  CHECK(back.runs("sphere-3D", "PSO")[1] == failed);
  REQUIRE(back.cell("sphere-3D", "PSO") != nullptr);
  CHECK(to_json(*back.cell("sphere-3D", "PSO")) == to_json(c));
  CHECK(back.timing("sphere-3D")->eval_seconds == 1.5e-8);
  CHECK((*back.plan())["seed"] == 1);
  CHECK(fs::exists(root / "refs" / "sphere-3D.json"));
  CHECK(fs::exists(root / "runs" / "sphere-3D" / "PSO.jsonl"));
  CHECK(fs::exists(root / "timings" / "sphere-3D.json"));
  CHECK(fs::exists(root / "plan.json"));

  // Known optimum wins; failed runs never count.
  const auto fm = back.f_minus("sphere-3D");
  CHECK(fm.value == 0.0);
  CHECK(fm.source == "known optimum");
  CHECK_THROWS_AS(back.f_minus("sphere-10D"), Error);
}

TEST_CASE("a torn run log is cut back to whole lines") {
  const fs::path root = fresh_dir("torn");
  RunTrace t;
  t.problem_id = "p";
  t.method_id = "RS";
  t.budget = 1;
  t.evaluations = 1;
  t.stage_best = {1.0, 1.0, 1.0};
  t.checkpoints = {{1, 1.0}};
  {
    ResultStore store(root);
    const std::vector<RunTrace> runs{t, t};
    store.append_runs("p", "RS", runs);
  }
  {
    std::ofstream out(root / "runs" / "p" / "RS.jsonl", std::ios::app);
    out << "{\"problem\": \"p\", \"meth";
  }
  ResultStore store(root);
  CHECK(store.runs("p", "RS").size() == 2);
  const std::vector<RunTrace> more{t};
  store.append_runs("p", "RS", more);
  CHECK(ResultStore(root).runs("p", "RS").size() == 3);
  store.truncate_runs("p", "RS", 1);
  CHECK(ResultStore(root).runs("p", "RS").size() == 1);
}

TEST_CASE("plan validation and json form") {
  BenchmarkPlan plan = small_plan("out");
  CHECK_NOTHROW(plan.validate());
  const auto again = BenchmarkPlan::from_json(plan.to_json());
  CHECK(again.to_json() == plan.to_json());

  BenchmarkPlan dup = plan;
  dup.methods.push_back(make_optimizer("RS"));
  CHECK_THROWS_AS(dup.validate(), Error);
  BenchmarkPlan zero = plan;
  zero.problems[0].budget = 0;
  CHECK_THROWS_AS(zero.validate(), Error);
  BenchmarkPlan unknown = plan;
  unknown.problems.push_back({"nope-3D", 10});
  try {
    unknown.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidPlan);
    CHECK(std::string(e.what()).find("nope-3D") != std::string::npos);
  }
}

TEST_CASE("engine: execute, invariants and resume") {
  const fs::path root = fresh_dir("engine");
  const BenchmarkPlan plan = small_plan(root);
  ExecuteSummary first;
  {
    ResultStore store(root);
    first = execute(plan, store, {2, false, {}, {}});
  }
  CHECK(first.cells == 6);
  CHECK(first.failed == 0);
  CHECK(first.converged + first.max_runs == 6);
  CHECK(first.new_runs >= 6 * 30);

  const ResultStore store(root);
  for (const auto& entry : plan.problems) {
    const auto* ref = store.reference(entry.id);
    REQUIRE(ref != nullptr);
    CHECK(ref->f_plus_trials >= 2000);
    CHECK(ref->f_circ_runs >= 30);
    CHECK(ref->f_circ[0] >= ref->f_circ[1]);
    CHECK(ref->f_circ[1] >= ref->f_circ[2]);
    CHECK(ref->f_plus >= ref->f_circ[2]);
    REQUIRE(store.timing(entry.id) != nullptr);

    // f- is the least value anywhere in the store.
    double least = std::min(ref->f_plus_best, ref->f_circ_best);
    if (ref->known_best) least = std::min(least, *ref->known_best);
    for (const auto& m : plan.methods) {
      const auto* cell = store.cell(entry.id, m.id);
      REQUIRE(cell != nullptr);
      CHECK(cell->runs == store.runs(entry.id, m.id).size());
      CHECK(cell->runs % 10 == 0);
      CHECK(cell->history.size() == cell->runs / 10);
      if (cell->status == CellStatus::Converged) {
        CHECK(cell->runs >= 30);
        CHECK(cell->range <= 0.01);
      } else {
        CHECK(cell->status == CellStatus::MaxRuns);
        CHECK(cell->runs == 60);
      }
      for (const auto& t : store.runs(entry.id, m.id)) least = std::min(least, t.best());
    }
    CHECK(store.f_minus(entry.id).value == least);

    // Stage anchors under the current map.
    RunTrace probe;
    probe.problem_id = entry.id;
    probe.stage_best = {least, ref->f_circ[2], ref->f_plus};
    CHECK(g_of_record(probe, Stage::Tenth, store) == doctest::Approx(1.0));
    CHECK(std::abs(g_of_record(probe, Stage::Half, store)) < 1e-12);
    CHECK(g_of_record(probe, Stage::Full, store) == doctest::Approx(-1.0));
  }
  CHECK(store.timing(kReferenceProblem) != nullptr);

  // Plain rerun refuses, resume adds nothing, a changed plan is rejected.
  {
    ResultStore again(root);
    CHECK_THROWS_AS(execute(plan, again), Error);
    const auto resumed = execute(plan, again, {1, true, {}, {}});
    CHECK(resumed.new_runs == 0);
    CHECK(resumed.cells == 6);
    BenchmarkPlan other = plan;
    other.master_seed = 43;
    try {
      execute(other, again, {1, true, {}, {}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidPlan);
    }
  }
}

TEST_CASE("engine: an interrupted cell resumes to the same result") {
  const fs::path clean = fresh_dir("clean");
  const fs::path cut = fresh_dir("cut");
  BenchmarkPlan plan = small_plan(clean);
  plan.problems.resize(1);
  {
    ResultStore store(clean);
    execute(plan, store);
  }
  plan.output = cut;
  {
    ResultStore store(cut);
    execute(plan, store);
  }
  // Drop the PSO cell record and leave a torn batch behind.
  const fs::path cell = cut / "cells" / "sphere-3D" / "PSO.json";
  REQUIRE(fs::exists(cell));
  fs::remove(cell);
  fs::remove(cut / "cells" / "sphere-3D" / "NM.json");
  {
    ResultStore store(cut);
    store.truncate_runs("sphere-3D", "PSO", 15);
  }
  {
    ResultStore store(cut);
    const auto s = execute(plan, store, {3, true, {}, {}});
    CHECK(s.new_runs > 0);
  }
  for (const char* m : {"RS", "NM", "PSO"}) {
    CAPTURE(m);
    const auto rel_cell = fs::path("cells") / "sphere-3D" / (std::string(m) + ".json");
    const ResultStore a(clean), b(cut);
    const auto ra = a.runs("sphere-3D", m);
    const auto rb = b.runs("sphere-3D", m);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(ra[i].seed == rb[i].seed);
      CHECK(ra[i].checkpoints == rb[i].checkpoints);
    }
    CHECK(slurp(clean / rel_cell) == slurp(cut / rel_cell));
  }
}

TEST_CASE("engine: failures are recorded and the matrix continues") {
  const fs::path root = fresh_dir("failing");
  BenchmarkPlan plan = small_plan(root);
  plan.problems = {{"sphere-3D", 25}};
  plan.methods = {make_external("crash", std::string("python3 ") + GBENCH_FIXTURE_DIR + "/crash_optimizer.py"),
                  make_optimizer("LSHADE"), make_optimizer("RS")};
  ResultStore store(root);
  const auto s = execute(plan, store);
  CHECK(s.cells == 3);
  CHECK(s.failed == 2);
  CHECK(s.failures.size() == 2);
  const auto* crash = store.cell("sphere-3D", "crash");
  REQUIRE(crash != nullptr);
  CHECK(crash->status == CellStatus::Failed);
  CHECK_FALSE(crash->reason.empty());
  const auto* de = store.cell("sphere-3D", "LSHADE");
  REQUIRE(de != nullptr);
  CHECK(de->status == CellStatus::Failed);
  CHECK(de->reason.find("minimum") != std::string::npos);
  CHECK(store.cell("sphere-3D", "RS")->status != CellStatus::Failed);
  // Failed runs do not move f-.
  CHECK(std::isfinite(store.f_minus("sphere-3D").value));
}

TEST_CASE("timing") {
  const Problem p = find_problem("sphere-10D");
  const auto t = time_evaluations(p, 1);
  CHECK(t.samples >= 50);
  CHECK(t.eval_seconds > 0.0);
  std::vector<RunTrace> runs;
  for (std::uint64_t s = 0; s < 3; ++s) runs.push_back(optimize(make_optimizer("RS"), p, 5000, s));
  const auto m = measure_timing(t, runs);
  CHECK(m.runs == 3);
  CHECK(m.overhead_per_eval >= 0.0);
  CHECK(m.eval_seconds == t.eval_seconds);
  runs.pop_back();
  CHECK_THROWS_AS(measure_timing(t, runs), Error);
}
