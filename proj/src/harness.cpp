#include "gbench/harness.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "gbench/error.hpp"

namespace gbench {

std::uint64_t stage_evaluation(std::uint64_t budget, Stage stage) {
  std::uint64_t n = budget;
  switch (stage) {
    case Stage::Tenth: n = budget / 10; break;
    case Stage::Half: n = budget / 2; break;
    case Stage::Full: n = budget; break;
  }
  return n == 0 ? 1 : n;
}

Objective::Objective(const Problem& problem, std::uint64_t budget)
    : problem_(problem),
      budget_(budget),
      best_(std::numeric_limits<double>::infinity()),
      scratch_(problem.dimension()) {}

double Objective::operator()(std::span<const double> x) {
  if (exhausted()) {
    truncated_ = true;
    throw BudgetExhausted{};
  }
  if (x.size() != scratch_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("expected {} coordinates, got {}", scratch_.size(), x.size()));
  }
  std::copy(x.begin(), x.end(), scratch_.begin());
  problem_.clamp(scratch_);
  const auto t0 = std::chrono::steady_clock::now();
  double f = problem_.evaluate(scratch_);
  eval_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ++used_;
  if (!std::isfinite(f)) {
    f = std::numeric_limits<double>::infinity();
  }
  if (f < best_ || checkpoints_.empty()) {
    best_ = f;
    best_point_ = scratch_;
    checkpoints_.push_back({used_, f});
  }
  return f;
}

double best_within(std::span<const Checkpoint> checkpoints, std::uint64_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : checkpoints) {
    if (c.evaluation > n) {
      break;
    }
    best = c.fitness;
  }
  return best;
}

RunTrace Objective::trace(std::string method_id, std::uint64_t seed, double wall_total) const {
  RunTrace t;
  t.problem_id = problem_.id();
  t.method_id = std::move(method_id);
  t.seed = seed;
  t.budget = budget_;
  t.evaluations = used_;
  t.checkpoints = checkpoints_;
  for (auto s : kStages) {
    t.stage_best[static_cast<std::size_t>(s)] = best_within(checkpoints_, stage_evaluation(budget_, s));
  }
  t.wall_total = wall_total;
  t.wall_eval = eval_seconds_;
  t.truncated = truncated_;
  return t;
}

}  // namespace gbench
