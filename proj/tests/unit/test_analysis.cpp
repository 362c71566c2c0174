#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "gbench/analysis.hpp"
#include "gbench/engine.hpp"
#include "gbench/error.hpp"
#include "gbench/report.hpp"
#include "gbench/stats.hpp"

using namespace gbench;
namespace fs = std::filesystem;

namespace {

RunTrace run_with(double f10, double f50, double f100) {
  RunTrace t;
  t.stage_best = {f10, f50, f100};
  return t;
}

std::map<std::string, std::set<std::string>> fixture_solved() {
  return {{"A", {"p1", "p2"}}, {"B", {"p1", "p2", "p3", "p4"}}, {"C", {"p5"}}, {"D", {}}, {"RS", {}}};
}

}  // namespace

TEST_CASE("repeat-weighted G") {
  CHECK(grw(std::vector<double>{0.3, 0.3, 0.3}) == doctest::Approx(0.3));
  std::vector<double> uniform;
  for (int i = 0; i <= 100000; ++i) uniform.push_back(-1.0 + 2.0 * i / 100000.0);
  double num = 0.0, den = 0.0;
  for (int i = 1; i <= 10; ++i) {
    num += (2.0 * std::pow(0.5, 1.0 / i) - 1.0) / i;
    den += 1.0 / i;
  }
  CHECK(grw(uniform) == doctest::Approx(num / den).epsilon(1e-9));
  CHECK(std::abs(grw(uniform) - 0.4279) < 1e-3);

  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 0.4);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> s(1 + k % 37);
    for (double& v : s) v = n(rng);
    CHECK(grw(s) >= stats::median(s) - 1e-15);
  }
}

TEST_CASE("staged and relative G") {
  const GMap map({0.0, 2.0, 8.0});
  const std::vector<RunTrace> same{run_with(6.0, 3.0, 1.0), run_with(6.0, 3.0, 1.0)};
  const auto g = staged_g(same, map);
  CHECK(g[0] == map(6.0));
  CHECK(g[1] == map(3.0));
  CHECK(g[2] == map(1.0));
  CHECK(g[0] <= g[1]);
  CHECK(g[1] <= g[2]);

  const auto rel = relative_g(same, 0.0, {6.0, 3.0, 2.0}, 8.0);
  CHECK(rel[2] == g[2]);
  CHECK(std::abs(rel[0]) < 1e-12);
  CHECK(std::abs(rel[1]) < 1e-12);

  RunTrace failed = run_with(INFINITY, INFINITY, INFINITY);
  failed.failed = true;
  const std::vector<RunTrace> with_failure{run_with(6.0, 3.0, 1.0), failed};
  CHECK(staged_g(with_failure, map) == g);
}

TEST_CASE("multimodality and weights") {
  CHECK(multimodality(1.0) == 0.0);
  CHECK(multimodality(-1.0) == 1.0);
  CHECK(multimodality(0.0) == 0.5);
  CHECK(multimodality(-3.0) == 1.0);
  CHECK(low_dimension_weight(5) == 1.0);
  CHECK(low_dimension_weight(10) == 1.0);
  CHECK(low_dimension_weight(20) == doctest::Approx(0.5));
  CHECK(low_dimension_weight(30) == 0.0);
  CHECK(low_dimension_weight(50) == 0.0);
  for (double gp : {-2.0, -0.5, 0.0, 0.3, 1.0, 1.4}) {
    CHECK(local_weight(gp) >= 0.0);
    CHECK(local_weight(gp) + (1.0 - local_weight(gp)) == 1.0);
  }
  CHECK(local_weight(0.3) == 0.3);
  CHECK(local_weight(-0.5) == 0.0);

  const std::array<double, 3> triple{0.2, 0.5, 0.9};
  CHECK(fast_blend(triple) == doctest::Approx(0.3));
  CHECK(exhaustive_blend(triple) == doctest::Approx(0.76666666666667));

  CHECK(*weighted_mean(std::vector<double>{0.8, 0.2}, std::vector<double>{1.0, 0.0}) == 0.8);
  CHECK_FALSE(weighted_mean(std::vector<double>{0.8, 0.2}, std::vector<double>{0.0, 0.0}).has_value());
  // A constant score survives any nonzero weighting.
  CHECK(*weighted_mean(std::vector<double>{0.4, 0.4, 0.4}, std::vector<double>{0.1, 0.0, 3.0}) ==
        doctest::Approx(0.4));
}

TEST_CASE("overlap matrix") {
  const auto solved = fixture_solved();
  const std::vector<std::string> methods{"A", "B", "C", "D", "RS"};
  const auto m = overlap_matrix(methods, solved);
  REQUIRE(m.values.size() == 5);
  CHECK(*m.values[0][1] == 1.0);   // A inside B
  CHECK(*m.values[1][0] == 0.5);   // |A| / |B|
  CHECK(*m.values[0][2] == 0.0);   // disjoint
  CHECK_FALSE(m.values[3][0].has_value());
  for (std::size_t i = 0; i < 3; ++i) CHECK(*m.values[i][i] == 1.0);
  for (const auto& row : m.values) {
    for (const auto& v : row) {
      if (v) {
        CHECK(*v >= 0.0);
        CHECK(*v <= 1.0);
      }
    }
  }
  CHECK(m.forced[4]);
  CHECK(*m.values[4][0] == 1.0);
  CHECK_FALSE(m.forced[0]);
}

TEST_CASE("best sets") {
  SolvedSets s;
  s.methods = {"A", "B", "C", "D", "RS"};
  s.by_g = fixture_solved();
  s.by_grw = fixture_solved();
  s.by_grw["D"] = {"p6", "p7", "p8", "p9", "p10"};
  const auto sets = best_sets(s, 5);
  REQUIRE(sets.by_g.size() == 5);
  CHECK(sets.by_g[0].methods == std::vector<std::string>{"B"});
  CHECK(sets.by_g[0].solved == 4);
  CHECK(sets.by_g[1].methods == std::vector<std::string>{"B", "C"});
  CHECK(sets.by_g[1].solved == 5);
  // Ties resolve to the lexicographically first set.
  CHECK(sets.by_g[2].methods == std::vector<std::string>{"A", "B", "C"});
  CHECK(sets.by_grw[0].methods == std::vector<std::string>{"D"});
  CHECK(sets.by_grw[0].solved_rw == 5);
  for (std::size_t k = 1; k < sets.by_g.size(); ++k) {
    CHECK(sets.by_g[k].solved >= sets.by_g[k - 1].solved);
    CHECK(sets.by_grw[k].solved_rw >= sets.by_grw[k - 1].solved_rw);
    CHECK(sets.by_g[k].solved <= 10);
  }
  CHECK(best_sets(s, 2).by_g.size() == 2);
}

TEST_CASE("uniqueness and sensitivity") {
  const auto solved = fixture_solved();
  const std::vector<std::string> methods{"A", "B", "C", "D", "RS"};
  CHECK(*uniqueness("A", methods, solved) == 0.0);
  CHECK(*uniqueness("B", methods, solved) == 0.5);
  CHECK(*uniqueness("C", methods, solved) == 1.0);
  CHECK_FALSE(uniqueness("D", methods, solved).has_value());

  const std::vector<double> m{0.1, 0.3, 0.5, 0.7};
  const std::vector<double> down{0.9, 0.5, 0.1, -0.3};
  const std::vector<double> up{-0.2, 0.0, 0.2, 0.4};
  CHECK(*multimodality_sensitivity(m, down) == doctest::Approx(-1.0));
  CHECK(*multimodality_sensitivity(m, up) == doctest::Approx(1.0));
  const std::vector<double> two{0.1, 0.1, 0.5, 0.5};
  CHECK_FALSE(multimodality_sensitivity(two, up).has_value());
}

TEST_CASE("analysis of an executed plan") {
  const fs::path root = fs::temp_directory_path() / "gbench-unit-analysis";
  fs::remove_all(root);
  BenchmarkPlan plan;
  plan.problems = {{"sphere-3D", 300}, {"SP-single-5D", 500}, {"PP-ctr2c-4D", 400}};
  plan.methods = {make_optimizer("RS"), make_optimizer("NM"), make_optimizer("LSHADE", {{"pop_init", 20}})};
  plan.convergence.window = 20;
  plan.convergence.min_runs = 30;
  plan.convergence.max_runs = 60;
  plan.master_seed = 3;
  plan.output = root;
  {
    ResultStore store(root);
    execute(plan, store, {2, false, {}, {}});
  }
  const ResultStore store(root);
  const Report rep = analyze(store);
  CHECK(rep.probe == "NM");
  CHECK(rep.methods == std::vector<std::string>{"RS", "NM", "LSHADE"});
  REQUIRE(rep.problems.size() == 3);
  CHECK(rep.cells.size() == 9);
  for (const auto& c : rep.cells) {
    CAPTURE(c.problem);
    CAPTURE(c.method);
    CHECK(c.grw >= c.g[2]);
    CHECK(c.g[0] <= c.g[1]);
    CHECK(c.g[1] <= c.g[2]);
    CHECK(c.relative[2] == c.g[2]);
    CHECK(std::isfinite(c.grw));
    CHECK(c.status != "incomplete");
  }
  for (const auto& p : rep.problems) {
    REQUIRE(p.multimodality.has_value());
    CHECK(*p.multimodality == multimodality(rep.cell(p.id, "NM")->g[2]));
    const double wl = local_weight(rep.cell(p.id, "NM")->g[2]);
    CHECK(wl + (1.0 - wl) == 1.0);
  }
  // Sphere is solved by the local probe.
  CHECK(rep.cell("sphere-3D", "NM")->g[2] > 0.9);
  CHECK(std::abs(rep.cell("sphere-3D", "RS")->g[2]) < 0.1);
  for (const auto& [m, props] : rep.properties) {
    REQUIRE(props.stability.has_value());
    CHECK(*props.stability <= 1.0);
    CHECK(*props.exploitation >= 0.0);
  }
  CHECK(rep.complexity.size() == 3);
  CHECK(rep.reference_eval_seconds.has_value());
  for (const auto& row : rep.complexity) CHECK(row.relative.has_value());

  const fs::path out1 = root / "report-a";
  const fs::path out2 = root / "report-b";
  const auto files = write_report(rep, out1);
  write_report(analyze(store), out2);
  bool saw_timing = false;
  for (const auto& f : files) {
    const auto rel = fs::relative(f, out1);
    if (is_timing_file(f)) {
      saw_timing = true;
      continue;
    }
    CHECK(read_file(f) == read_file(out2 / rel));
  }
  CHECK(saw_timing);
  for (const char* name : {"cells.csv", "cells.json", "attributes.csv", "properties.csv", "overlap.csv",
                           "best_sets.csv", "problems.csv", "meta.json", "radar.svg", "scatter.svg"}) {
    CHECK(fs::exists(out1 / name));
  }
  CHECK(is_timing_file("complexity.csv"));
  CHECK_FALSE(is_timing_file("cells.csv"));
}

TEST_CASE("runs without references are reported by problem") {
  const fs::path root = fs::temp_directory_path() / "gbench-unit-noref";
  fs::remove_all(root);
  ResultStore store(root);
  RunTrace t;
  t.problem_id = "sphere-3D";
  t.method_id = "RS";
  t.stage_best = {1.0, 1.0, 1.0};
  const std::vector<RunTrace> runs{t};
  store.append_runs("sphere-3D", "RS", runs);
  try {
    analyze(ResultStore(root));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingReferences);
    CHECK(std::string(e.what()).find("sphere-3D") != std::string::npos);
  }
}
