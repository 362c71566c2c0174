#include <algorithm>

#include "common.hpp"
#include "gbench/optimizers.hpp"

namespace gbench {

void random_search(Objective& obj, Rng& rng, std::size_t batch_size) {
  const std::size_t batch = batch_size == 0 ? obj.dimension() : batch_size;
  while (!obj.exhausted()) {
    const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(batch, obj.remaining()));
    std::vector<std::vector<double>> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back(detail::uniform_point(obj, rng));
    }
    for (const auto& p : points) {
      obj(p);
    }
  }
}

}  // namespace gbench
