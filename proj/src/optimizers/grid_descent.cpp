#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "gbench/optimizers.hpp"

namespace gbench {

LocalSearchStats grid_descent(Objective& obj, Rng& rng, const GridDescentParams& params) {
  const std::size_t n = obj.dimension();
  LocalSearchStats stats;
  std::vector<double> h(n), probe(n);

  for (bool first = true; !obj.exhausted(); first = false) {
    if (!first) {
      ++stats.restarts;
    }
    auto x = detail::uniform_point(obj, rng);
    double fx = obj(x);
    for (std::size_t scale = 0; scale <= params.scale_max && !obj.exhausted();) {
      const double denom = static_cast<double>(params.divisions) * std::pow(static_cast<double>(params.base), scale);
      for (std::size_t i = 0; i < n; ++i) h[i] = (obj.upper()[i] - obj.lower()[i]) / denom;

      bool improved = false;
      for (std::size_t i = 0; i < n && !obj.exhausted(); ++i) {
        for (double dir : {1.0, -1.0}) {
          // Keep stepping along the axis while it pays off.
          bool moved = false;
          while (!obj.exhausted()) {
            probe = x;
            probe[i] = std::clamp(x[i] + dir * h[i], obj.lower()[i], obj.upper()[i]);
            if (probe[i] == x[i]) {
              break;
            }
            const double fp = obj(probe);
            if (!(fp < fx)) {
              break;
            }
            x.swap(probe);
            fx = fp;
            moved = true;
          }
          if (moved) {
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        ++scale;
      }
    }
  }
  return stats;
}

}  // namespace gbench
