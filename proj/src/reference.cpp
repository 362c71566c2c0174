#include "gbench/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "gbench/error.hpp"
#include "gbench/optimizers.hpp"
#include "gbench/parallel.hpp"
#include "gbench/rng.hpp"
#include "gbench/stats.hpp"

namespace gbench {

void ConvergenceConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, what); };
  if (batch_size == 0) fail("batch_size must be at least 1");
  if (window == 0 || window > min_runs) fail(fmt::format("window {} must be in [1, min_runs = {}]", window, min_runs));
  if (!(eps > 0.0) || !std::isfinite(eps)) fail("eps must be positive");
  if (min_runs > max_runs) fail(fmt::format("min_runs {} exceeds max_runs {}", min_runs, max_runs));
  if (min_trials == 0 || min_trials > max_trials) {
    fail(fmt::format("min_trials {} must be in [1, max_trials = {}]", min_trials, max_trials));
  }
}

void MedianTracker::push(double value) {
  values_.push_back(value);
  sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), value), value);
  const std::size_t n = sorted_.size();
  medians_.push_back(n % 2 == 1 ? sorted_[n / 2] : 0.5 * (sorted_[n / 2 - 1] + sorted_[n / 2]));
}

void MedianTracker::clear() {
  values_.clear();
  sorted_.clear();
  medians_.clear();
}

double MedianTracker::median() const {
  if (medians_.empty()) {
    throw Error(ErrorKind::InvalidInput, "median of an empty tracker");
  }
  return medians_.back();
}

double MedianTracker::range(std::size_t window) const {
  if (medians_.empty()) return 0.0;
  const std::size_t from = medians_.size() - std::min(window, medians_.size());
  const auto [lo, hi] = std::minmax_element(medians_.begin() + static_cast<std::ptrdiff_t>(from), medians_.end());
  return *hi - *lo;
}

bool converged(const MedianTracker& tracker, const ConvergenceConfig& cfg, double scale) {
  if (tracker.size() < cfg.min_runs) return false;
  const double r = tracker.range(cfg.window);
  const double normalized = scale > 0.0 ? r / scale : 0.0;
  return normalized <= cfg.eps;
}

std::vector<Sample> sample_uniform(const Problem& problem, std::size_t count, std::uint64_t seed) {
  if (count == 0) {
    throw Error(ErrorKind::InvalidInput, "sample count must be at least 1");
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto lo = problem.lower();
  const auto hi = problem.upper();
  std::vector<Sample> out(count);
  for (auto& s : out) {
    s.point.resize(problem.dimension());
    for (std::size_t i = 0; i < s.point.size(); ++i) {
      s.point[i] = std::clamp(lo[i] + u(rng) * (hi[i] - lo[i]), lo[i], hi[i]);
    }
  }
  for (auto& s : out) {
    s.fitness = problem.evaluate(s.point);
    if (!std::isfinite(s.fitness)) {
      s.fitness = std::numeric_limits<double>::infinity();
      s.failed = true;
    }
  }
  return out;
}

FPlusEstimate estimate_f_plus(const Problem& problem, const ConvergenceConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  FPlusEstimate est;
  std::vector<double> sorted;
  std::vector<double> batch_medians;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  for (std::uint64_t b = 0; est.trials < cfg.max_trials; ++b) {
    const std::size_t n = std::min(cfg.batch_size, cfg.max_trials - est.trials);
    for (const auto& s : sample_uniform(problem, n, stream_seed(seed, b))) {
      sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), s.fitness), s.fitness);
      if (!s.failed) {
        lo = std::min(lo, s.fitness);
        hi = std::max(hi, s.fitness);
      }
    }
    est.trials += n;
    batch_medians.push_back(stats::quantile_sorted(sorted, 0.5));

    if (est.trials < cfg.min_trials) continue;
    const double spread = hi > lo ? hi - lo : 0.0;
    if (spread == 0.0) {
      est.degenerate = true;
      est.converged = true;
      est.final_range = 0.0;
      break;
    }
    const std::size_t from = batch_medians.size() - std::min(cfg.window, batch_medians.size());
    const auto [mn, mx] =
        std::minmax_element(batch_medians.begin() + static_cast<std::ptrdiff_t>(from), batch_medians.end());
    est.final_range = (*mx - *mn) / spread;
    if (est.final_range <= cfg.eps) {
      est.converged = true;
      break;
    }
  }
  est.f_plus = batch_medians.back();
  est.best_sample = sorted.front();
  return est;
}

RunTrace run_random_search(const Problem& problem, std::uint64_t budget, std::uint64_t seed) {
  if (budget < problem.dimension()) {
    throw Error(ErrorKind::InvalidInput,
                fmt::format("random search budget {} is below the dimension {}", budget, problem.dimension()));
  }
  return optimize(make_optimizer("RS"), problem, budget, seed);
}

FCircEstimate estimate_f_circ(const Problem& problem, std::uint64_t budget, const ConvergenceConfig& cfg,
                              std::uint64_t seed, std::size_t jobs) {
  cfg.validate();
  FCircEstimate est;
  MedianTracker tracker;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  while (est.traces.size() < cfg.max_runs) {
    const std::size_t first = est.traces.size();
    const std::size_t n = std::min(cfg.batch_size, cfg.max_runs - first);
    std::vector<RunTrace> batch(n);
    parallel_for(n, jobs, [&](std::size_t i) { batch[i] = run_random_search(problem, budget, stream_seed(seed, first + i)); });
    for (auto& t : batch) {
      const double best = t.best();
      tracker.push(best);
      if (std::isfinite(best)) {
        lo = std::min(lo, best);
        hi = std::max(hi, best);
      }
      est.traces.push_back(std::move(t));
    }
    const double spread = hi > lo ? hi - lo : 0.0;
    est.final_range = spread > 0.0 ? tracker.range(cfg.window) / spread : 0.0;
    if (converged(tracker, cfg, spread)) {
      est.converged = true;
      break;
    }
  }

  est.runs = est.traces.size();
  for (auto s : kStages) {
    std::vector<double> v;
    v.reserve(est.traces.size());
    for (const auto& t : est.traces) v.push_back(t.at(s));
    est.f_circ[static_cast<std::size_t>(s)] = stats::median(v);
  }
  return est;
}

}  // namespace gbench
