#pragma once

// Runs a benchmark matrix: references per problem, then every
// (problem, method) cell in batches until its median G stabilizes.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbench/optimizers.hpp"
#include "gbench/reference.hpp"
#include "gbench/store.hpp"

namespace gbench {

inline constexpr const char* kReferenceProblem = "REF-10D";

struct ProblemEntry {
  std::string id;
  std::uint64_t budget = 0;
};

struct BenchmarkPlan {
  std::vector<ProblemEntry> problems;
  std::vector<OptimizerSpec> methods;
  ConvergenceConfig convergence;
  std::uint64_t master_seed = 0;
  /// Local method whose G defines multimodality and local/global weights.
  std::string probe = "NM";
  std::filesystem::path output;

  /// Throws Error(InvalidPlan) naming the first problem found.
  void validate() const;
  nlohmann::json to_json() const;
  static BenchmarkPlan from_json(const nlohmann::json& j);
};

struct CellProgress {
  std::string problem;
  std::string method;
  std::size_t runs = 0;
  double median_g = 0.0;
  double range = 0.0;
  bool finished = false;
  CellStatus status = CellStatus::Converged;
};

struct ExecuteOptions {
  std::size_t jobs = 1;
  bool resume = false;
  std::function<void(const CellProgress&)> progress;
  std::function<void(const std::string&)> log;
};

struct ExecuteSummary {
  std::size_t new_runs = 0;
  std::size_t cells = 0;
  std::size_t converged = 0;
  std::size_t max_runs = 0;
  std::size_t failed = 0;
  std::vector<std::string> failures;
};

/// Executes (or, with resume, completes) a plan into `store`. Cell failures
/// are recorded and do not stop the matrix. Results depend only on the plan,
/// never on `jobs`.
ExecuteSummary execute(const BenchmarkPlan& plan, ResultStore& store, const ExecuteOptions& options = {});

/// Stage G of a stored run under the store's current map.
double g_of_record(const RunTrace& record, Stage stage, const ResultStore& store);

/// Times bare evaluations of uniform points.
TimingRecord time_evaluations(const Problem& problem, std::uint64_t seed);

struct MethodTiming {
  double eval_seconds = 0.0;       // T_f
  double overhead_per_eval = 0.0;  // T_m / n_eval, floored at 0
  std::size_t runs = 0;
  bool low_confidence = false;
};

/// Needs at least 3 timed runs; throws Error(InvalidInput) otherwise.
MethodTiming measure_timing(const TimingRecord& evaluation, std::span<const RunTrace> runs);

}  // namespace gbench
