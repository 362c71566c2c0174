#pragma once

#include <random>
#include <span>
#include <vector>

#include "gbench/harness.hpp"
#include "gbench/rng.hpp"

namespace gbench::detail {

inline std::vector<double> uniform_point(const Objective& obj, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(obj.dimension());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = obj.lower()[i] + u(rng) * (obj.upper()[i] - obj.lower()[i]);
  }
  return x;
}

inline void clamp_into(const Objective& obj, std::span<double> x) { obj.problem().clamp(x); }

}  // namespace gbench::detail
