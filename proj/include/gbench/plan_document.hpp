#pragma once

// Human-edited plan files (YAML; JSON is accepted as a subset).
//
//   seed: 7
//   output: runs/demo            # relative paths resolve against the root
//   probe: NM
//   budget: 2000                 # default for problems without one
//   convergence: {batch_size: 10, window: 50, eps: 0.01, min_runs: 100,
//                 max_runs: 1000, min_trials: 2000, max_trials: 200000}
//   problems:
//     - sphere-10D
//     - {id: SP-zigzag-20D, budget: 4000}
//   methods:
//     - RS
//     - {id: PSO, params: {inertia: 0.6}}
//     - {id: my-de, command: "python3 de.py", scope: global, kind: stochastic}

#include <filesystem>
#include <string>

#include "gbench/engine.hpp"
#include "gbench/error.hpp"

namespace gbench {

class PlanError : public Error {
 public:
  PlanError(std::string source, int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses and validates a plan. Relative output paths are joined to
/// output_root. Throws PlanError with a 1-based line and column.
BenchmarkPlan parse_plan(const std::string& text, const std::string& source,
                         const std::filesystem::path& output_root);
BenchmarkPlan load_plan(const std::filesystem::path& path, const std::filesystem::path& output_root);

}  // namespace gbench
