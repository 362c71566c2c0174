#pragma once

// Reference points f+ (median of uniform samples) and f° (median of random
// search run bests), each estimated under a sequential median-stability rule.

#include <array>
#include <cstdint>
#include <vector>

#include "gbench/harness.hpp"
#include "gbench/problem.hpp"

namespace gbench {

struct ConvergenceConfig {
  std::size_t batch_size = 10;
  std::size_t window = 50;
  double eps = 0.01;
  std::size_t min_runs = 100;
  std::size_t max_runs = 1000;
  /// Uniform sampling for f+ never stops before min_trials samples.
  std::size_t min_trials = 2000;
  std::size_t max_trials = 200000;

  /// Throws Error(InvalidInput) on window > min_runs, eps <= 0, batch_size 0,
  /// min_runs > max_runs or min_trials > max_trials.
  void validate() const;
};

/// Exact running medians of a growing sequence.
class MedianTracker {
 public:
  void push(double value);
  void clear();

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  /// medians()[r - 1] is the median of the first r values.
  const std::vector<double>& medians() const noexcept { return medians_; }
  double median() const;
  /// max - min of the last `window` medians (fewer if not available).
  double range(std::size_t window) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  std::vector<double> medians_;
};

/// r >= min_runs and range(window) / scale <= eps. A non-positive scale
/// counts as zero range.
bool converged(const MedianTracker& tracker, const ConvergenceConfig& cfg, double scale = 1.0);

struct Sample {
  std::vector<double> point;
  double fitness = 0.0;
  bool failed = false;  // non-finite fitness, stored as +inf
};

std::vector<Sample> sample_uniform(const Problem& problem, std::size_t count, std::uint64_t seed);

struct FPlusEstimate {
  double f_plus = 0.0;
  std::size_t trials = 0;
  bool degenerate = false;
  bool converged = false;
  double best_sample = 0.0;
  /// Normalized range of the last window of batch medians at the stop.
  double final_range = 0.0;
};

FPlusEstimate estimate_f_plus(const Problem& problem, const ConvergenceConfig& cfg, std::uint64_t seed);

/// Random search with batch size D.
RunTrace run_random_search(const Problem& problem, std::uint64_t budget, std::uint64_t seed);

struct FCircEstimate {
  std::array<double, 3> f_circ{};  // medians of run bests at 10%, 50%, 100%
  std::size_t runs = 0;
  bool converged = false;
  double final_range = 0.0;
  std::vector<RunTrace> traces;
};

/// Run seeds are stream_seed(seed, run index); runs within a batch use up to
/// `jobs` threads without affecting the result.
FCircEstimate estimate_f_circ(const Problem& problem, std::uint64_t budget, const ConvergenceConfig& cfg,
                              std::uint64_t seed, std::size_t jobs = 1);

}  // namespace gbench
