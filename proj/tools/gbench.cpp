// Command-line front end: run plans, analyze stores, evaluate G by hand.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "gbench/analysis.hpp"
#include "gbench/engine.hpp"
#include "gbench/metric.hpp"
#include "gbench/plan_document.hpp"
#include "gbench/problems/catalog.hpp"
#include "gbench/report.hpp"
#include "gbench/store.hpp"

namespace fs = std::filesystem;
using namespace gbench;

namespace {

constexpr int kFailure = 1;
constexpr int kBadPlan = 2;

fs::path output_root() {
  if (const char* env = std::getenv("GBENCH_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
  return fs::current_path();
}

int cmd_run(const fs::path& plan_path, bool resume, std::size_t jobs, bool verbose) {
  BenchmarkPlan plan;
  try {
    plan = load_plan(plan_path, output_root());
  } catch (const Error& e) {
    fmt::print(stderr, "{}\n", e.what());
    return kBadPlan;
  }

  try {
    ResultStore store(plan.output);
    ExecuteOptions opt;
    opt.jobs = std::max<std::size_t>(1, jobs);
    opt.resume = resume;
    opt.log = [](const std::string& line) { fmt::print("{}\n", line); };
    opt.progress = [verbose](const CellProgress& p) {
      if (p.finished) {
        fmt::print("{} / {}: {} runs, median G {:.4f}, range {:.4f}, {}\n", p.problem, p.method, p.runs, p.median_g,
                   p.range, to_string(p.status));
      } else if (verbose) {
        fmt::print("  {} / {}: {} runs, median G {:.4f}, range {:.4f}\n", p.problem, p.method, p.runs, p.median_g,
                   p.range);
      }
      std::fflush(stdout);
    };
    const auto summary = execute(plan, store, opt);
    fmt::print("{} cells: {} converged, {} at max runs, {} failed; {} new runs\n", summary.cells, summary.converged,
               summary.max_runs, summary.failed, summary.new_runs);
    for (const auto& f : summary.failures) fmt::print(stderr, "failed: {}\n", f);
    return summary.failed == 0 ? 0 : kFailure;
  } catch (const Error& e) {
    fmt::print(stderr, "{}\n", e.what());
    return e.kind() == ErrorKind::InvalidPlan ? kBadPlan : kFailure;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFailure;
  }
}

int cmd_analyze(const fs::path& store_path, const std::string& probe, const fs::path& report_dir) {
  try {
    if (!fs::is_directory(store_path)) {
      fmt::print(stderr, "no store at {}\n", store_path.string());
      return kFailure;
    }
    const ResultStore store(store_path);
    AnalysisOptions opt;
    opt.probe = probe;
    const auto report = analyze(store, opt);
    const auto dir = report_dir.empty() ? store_path / "report" : report_dir;
    const auto files = write_report(report, dir);
    fmt::print("{} problems, {} methods, {} cells; wrote {} files to {}\n", report.problems.size(),
               report.methods.size(), report.cells.size(), files.size(), dir.string());
    return 0;
  } catch (const std::exception& e) {
    fmt::print(stderr, "{}\n", e.what());
    return kFailure;
  }
}

int cmd_gmap(const std::vector<double>& values) {
  if (values.size() < 4) {
    fmt::print(stderr, "gmap needs f- f° f+ and at least one f\n");
    return kBadPlan;
  }
  try {
    const GMap map(ReferencePoints{values[0], values[1], values[2]});
    for (std::size_t i = 3; i < values.size(); ++i) {
      const auto g = map.evaluate(values[i]);
      fmt::print("{} {}{}\n", values[i], g.value, g.extrapolated ? " extrapolated" : "");
    }
    return 0;
  } catch (const std::exception& e) {
    fmt::print(stderr, "{}\n", e.what());
    return kFailure;
  }
}

int cmd_catalog(const std::string& family) {
  try {
    const auto problems = family.empty() ? default_catalog() : make_family(parse_family(family));
    fmt::print("{}\n", catalog_json(problems).dump(2));
    return 0;
  } catch (const std::exception& e) {
    fmt::print(stderr, "{}\n", e.what());
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for bounded continuous minimization"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute a benchmark plan");
  fs::path plan_path;
  bool resume = false, verbose = false;
  std::size_t jobs = 1;
  run->add_option("--plan", plan_path, "Plan file (YAML or JSON)")->required();
  run->add_flag("--resume", resume, "Continue an interrupted or finished store");
  run->add_option("--jobs", jobs, "Concurrent runs within a batch")->check(CLI::PositiveNumber);
  run->add_flag("-v,--verbose", verbose, "Print every batch");

  auto* an = app.add_subcommand("analyze", "Write analysis reports for a store");
  fs::path store_path, report_dir;
  std::string probe;
  an->add_option("--store", store_path, "Result store directory")->required();
  an->add_option("--probe", probe, "Probe method id (default: the plan's)");
  an->add_option("--report", report_dir, "Report directory (default: <store>/report)");

  auto* gm = app.add_subcommand("gmap", "Print G for values f given f- f° f+");
  std::vector<double> values;
  gm->add_option("values", values, "f- f° f+ f...")->required()->allow_extra_args();

  auto* cat = app.add_subcommand("catalog", "Print the problem catalog as JSON");
  std::string family;
  cat->add_option("--family", family, "SP, EC, PP or SYNTH");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kBadPlan;
  }

  if (*run) return cmd_run(plan_path, resume, jobs, verbose);
  if (*an) return cmd_analyze(store_path, probe, report_dir);
  if (*gm) return cmd_gmap(values);
  if (*cat) return cmd_catalog(family);
  return kBadPlan;
}
