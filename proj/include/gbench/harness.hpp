#pragma once

// Budgeted evaluation loop shared by every optimizer. The harness owns the
// evaluation cap, clamps candidates into bounds and records the best-so-far
// trajectory of a run.

#include <array>
#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gbench/problem.hpp"

namespace gbench {

enum class Stage { Tenth = 0, Half = 1, Full = 2 };
inline constexpr std::array<Stage, 3> kStages = {Stage::Tenth, Stage::Half, Stage::Full};

/// Evaluation index at which a stage is read: floor(0.1 B), floor(0.5 B), B
/// (at least 1).
std::uint64_t stage_evaluation(std::uint64_t budget, Stage stage);

struct Checkpoint {
  std::uint64_t evaluation = 0;  // 1-based evaluation index
  double fitness = 0.0;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct RunTrace {
  std::string problem_id;
  std::string method_id;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::uint64_t evaluations = 0;
  std::array<double, 3> stage_best{};
  /// Best-so-far improvements, strictly decreasing in fitness.
  std::vector<Checkpoint> checkpoints;
  double wall_total = 0.0;  // seconds
  double wall_eval = 0.0;   // seconds spent inside the evaluator
  bool truncated = false;
  bool failed = false;
  std::string failure;

  double best() const { return stage_best[2]; }
  double at(Stage s) const { return stage_best[static_cast<std::size_t>(s)]; }

  friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

/// Thrown by Objective when a method asks for more than its budget.
struct BudgetExhausted {};

class Objective {
 public:
  Objective(const Problem& problem, std::uint64_t budget);

  /// Clamps x into bounds, evaluates, records. Non-finite fitness counts as
  /// +inf. Throws BudgetExhausted (and marks the run truncated) once the
  /// budget is spent.
  double operator()(std::span<const double> x);

  const Problem& problem() const noexcept { return problem_; }
  std::size_t dimension() const noexcept { return problem_.dimension(); }
  std::span<const double> lower() const noexcept { return problem_.lower(); }
  std::span<const double> upper() const noexcept { return problem_.upper(); }

  std::uint64_t budget() const noexcept { return budget_; }
  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t remaining() const noexcept { return budget_ - used_; }
  bool exhausted() const noexcept { return used_ >= budget_; }

  double best() const noexcept { return best_; }
  std::span<const double> best_point() const noexcept { return best_point_; }

  void mark_truncated() noexcept { truncated_ = true; }
  bool truncated() const noexcept { return truncated_; }
  double eval_seconds() const noexcept { return eval_seconds_; }
  std::span<const Checkpoint> checkpoints() const noexcept { return checkpoints_; }

  /// Builds the trace; wall_total is supplied by the caller.
  RunTrace trace(std::string method_id, std::uint64_t seed, double wall_total) const;

 private:
  const Problem& problem_;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
  double best_;
  std::vector<double> best_point_;
  std::vector<double> scratch_;
  std::vector<Checkpoint> checkpoints_;
  double eval_seconds_ = 0.0;
  bool truncated_ = false;
};

/// Best fitness among the first n evaluations given best-so-far checkpoints.
double best_within(std::span<const Checkpoint> checkpoints, std::uint64_t n);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace gbench
