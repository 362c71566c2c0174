#include <algorithm>
#include <limits>

#include "common.hpp"
#include "gbench/optimizers.hpp"

namespace gbench {

std::size_t ParticleSwarmParams::resolved_swarm(std::size_t dimension) const {
  return swarm_size != 0 ? swarm_size : std::max<std::size_t>(10, dimension);
}

void particle_swarm(Objective& obj, Rng& rng, const ParticleSwarmParams& params) {
  const std::size_t n = obj.dimension();
  const std::size_t swarm = params.resolved_swarm(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  std::vector<double> vmax(n);
  for (std::size_t i = 0; i < n; ++i) vmax[i] = params.velocity_clamp * (obj.upper()[i] - obj.lower()[i]);

  std::vector<std::vector<double>> x(swarm), v(swarm, std::vector<double>(n)), pbest(swarm);
  std::vector<double> pbest_f(swarm, std::numeric_limits<double>::infinity());
  std::vector<double> gbest;
  double gbest_f = std::numeric_limits<double>::infinity();

  for (std::size_t p = 0; p < swarm; ++p) {
    x[p] = detail::uniform_point(obj, rng);
    for (std::size_t i = 0; i < n; ++i) v[p][i] = (2.0 * u(rng) - 1.0) * 0.2 * vmax[i];
  }
  for (std::size_t p = 0; p < swarm && !obj.exhausted(); ++p) {
    pbest[p] = x[p];
    pbest_f[p] = obj(x[p]);
    if (pbest_f[p] < gbest_f || gbest.empty()) {
      gbest_f = pbest_f[p];
      gbest = x[p];
    }
  }

  while (!obj.exhausted()) {
    for (std::size_t p = 0; p < swarm && !obj.exhausted(); ++p) {
      for (std::size_t i = 0; i < n; ++i) {
        double vi = params.inertia * v[p][i] + params.cognitive * u(rng) * (pbest[p][i] - x[p][i]) +
                    params.social * u(rng) * (gbest[i] - x[p][i]);
        v[p][i] = std::clamp(vi, -vmax[i], vmax[i]);
        x[p][i] = std::clamp(x[p][i] + v[p][i], obj.lower()[i], obj.upper()[i]);
      }
      const double f = obj(x[p]);
      if (f < pbest_f[p]) {
        pbest_f[p] = f;
        pbest[p] = x[p];
        if (f < gbest_f) {
          gbest_f = f;
          gbest = x[p];
        }
      }
    }
  }
}

}  // namespace gbench
