#include "gbench/problem.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gbench/error.hpp"

namespace gbench {

Problem::Problem(std::string id, std::string family, std::vector<double> lower, std::vector<double> upper,
                 Evaluator evaluator, std::set<std::string> tags, std::optional<double> known_best,
                 nlohmann::json params)
    : id_(std::move(id)),
      family_(std::move(family)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      tags_(std::move(tags)),
      known_best_(known_best),
      params_(std::move(params)),
      counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw Error(ErrorKind::DimensionMismatch, fmt::format("problem {}: bounds of unequal length", id_));
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
      throw Error(ErrorKind::InvalidInput, fmt::format("problem {}: invalid bounds on axis {}", id_, i));
    }
  }
  tags_.insert(family_);
}

double Problem::evaluate(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("problem {} expects {} variables, got {}", id_, dimension(), x.size()));
  }
  if (!contains(x)) {
    throw Error(ErrorKind::OutOfBounds, fmt::format("problem {}: point outside bounds", id_));
  }
  counter_->fetch_add(1, std::memory_order_relaxed);
  return (*evaluator_)(x);
}

bool Problem::contains(std::span<const double> x) const noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) {
      return false;
    }
  }
  return true;
}

void Problem::clamp(std::span<double> x) const noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) {
    // NaN coordinates collapse onto the lower bound.
    x[i] = std::isnan(x[i]) ? lower_[i] : std::clamp(x[i], lower_[i], upper_[i]);
  }
}

nlohmann::json describe(const Problem& problem) {
  return {
      {"id", problem.id()},
      {"dimension", problem.dimension()},
      {"lower_bounds", std::vector<double>(problem.lower().begin(), problem.lower().end())},
      {"upper_bounds", std::vector<double>(problem.upper().begin(), problem.upper().end())},
      {"family", problem.family()},
      {"params", problem.params()},
  };
}

}  // namespace gbench
