#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace gbench {

/// A bounded continuous minimization problem. Copies share the evaluator and
/// the evaluation counter.
class Problem {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  Problem(std::string id, std::string family, std::vector<double> lower, std::vector<double> upper,
          Evaluator evaluator, std::set<std::string> tags = {},
          std::optional<double> known_best = std::nullopt, nlohmann::json params = nlohmann::json::object());

  const std::string& id() const noexcept { return id_; }
  const std::string& family() const noexcept { return family_; }
  std::size_t dimension() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }
  const std::set<std::string>& tags() const noexcept { return tags_; }
  std::optional<double> known_best() const noexcept { return known_best_; }
  const nlohmann::json& params() const noexcept { return params_; }
  /// Simulation-backed problems are excluded from complexity averages.
  bool is_simulation() const { return tags_.count("simulation") > 0; }

  /// Checked evaluation: dimension and bounds are verified, the counter is
  /// incremented once.
  double evaluate(std::span<const double> x) const;

  bool contains(std::span<const double> x) const noexcept;
  void clamp(std::span<double> x) const noexcept;

  std::uint64_t evaluations() const noexcept { return counter_->load(std::memory_order_relaxed); }

 private:
  std::string id_;
  std::string family_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::shared_ptr<const Evaluator> evaluator_;
  std::set<std::string> tags_;
  std::optional<double> known_best_;
  nlohmann::json params_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

/// Catalog entry used by external consumers: id, dimension, bounds, family, params.
nlohmann::json describe(const Problem& problem);

}  // namespace gbench
