#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "common.hpp"
#include "gbench/optimizers.hpp"

namespace gbench {

namespace {

constexpr double kTerminal = -1.0;  // memory value pinning CR to 0

struct Member {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
};

// Weighted Lehmer mean sum(w v^2) / sum(w v), weights from fitness gains.
double lehmer(const std::vector<double>& values, const std::vector<double>& gains) {
  std::vector<double> w(gains);
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!std::isfinite(total) || total <= 0.0) {
    // Infinite gains (an infeasible parent replaced) or no measurable gain:
    // share the weight evenly among the infinite ones, or all of them.
    const bool any_inf = std::any_of(w.begin(), w.end(), [](double g) { return std::isinf(g); });
    for (double& g : w) g = (!any_inf || std::isinf(g)) ? 1.0 : 0.0;
    total = std::accumulate(w.begin(), w.end(), 0.0);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += w[i] / total * values[i] * values[i];
    den += w[i] / total * values[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

std::size_t LshadeParams::resolved_pop_init(std::size_t dimension) const {
  return pop_init != 0 ? pop_init : std::max<std::size_t>(30, 5 * dimension);
}

std::size_t lshade_population(std::size_t pop_init, std::size_t pop_min, std::uint64_t evaluations,
                              std::uint64_t budget) {
  if (budget == 0 || evaluations >= budget) {
    return pop_min;
  }
  const double planned = (static_cast<double>(pop_min) - static_cast<double>(pop_init)) / static_cast<double>(budget) *
                             static_cast<double>(evaluations) +
                         static_cast<double>(pop_init);
  return std::max(pop_min, static_cast<std::size_t>(std::lround(planned)));
}

LshadeStats lshade(Objective& obj, Rng& rng, const LshadeParams& params,
                   const std::function<void(const LshadeGeneration&)>& on_generation) {
  const std::size_t n = obj.dimension();
  const std::size_t pop_init = params.resolved_pop_init(n);
  const std::size_t pop_min = std::min(params.pop_min, pop_init);
  const std::size_t memory = std::max<std::size_t>(1, params.memory_size);
  const std::uint64_t budget = obj.budget();

  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::cauchy_distribution<double> cauchy(0.0, 1.0);
  auto pick = [&rng](std::size_t count) { return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng); };

  auto capacity_for = [&](std::size_t pop) {
    return static_cast<std::size_t>(std::lround(params.archive_rate * static_cast<double>(pop)));
  };

  std::vector<Member> pop;
  pop.reserve(pop_init);
  for (std::size_t i = 0; i < pop_init && !obj.exhausted(); ++i) {
    Member m{detail::uniform_point(obj, rng), 0.0};
    m.f = obj(m.x);
    pop.push_back(std::move(m));
  }

  std::vector<std::vector<double>> archive;
  std::size_t capacity = capacity_for(pop.size());
  std::vector<double> mem_f(memory, 0.5), mem_cr(memory, 0.5);
  std::size_t mem_k = 0;

  LshadeStats stats;
  std::vector<std::size_t> order;
  std::vector<double> trial(n);
  std::vector<double> s_f, s_cr, s_gain;

  while (!obj.exhausted() && pop.size() >= 3) {
    ++stats.generations;
    const std::size_t np = pop.size();

    order.resize(np);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pop[a].f < pop[b].f; });
    const std::size_t top = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::lround(params.p_best * static_cast<double>(np))));

    std::vector<Member> next = pop;
    s_f.clear();
    s_cr.clear();
    s_gain.clear();

    for (std::size_t i = 0; i < np && !obj.exhausted(); ++i) {
      const std::size_t r = pick(memory);
      double cr = 0.0;
      if (mem_cr[r] != kTerminal) {
        cr = std::clamp(mem_cr[r] + 0.1 * gauss(rng), 0.0, 1.0);
      }
      double f = 0.0;
      do {
        f = mem_f[r] + 0.1 * cauchy(rng);
      } while (f <= 0.0);
      f = std::min(f, 1.0);

      const std::size_t pbest = order[pick(std::min(top, np))];
      std::size_t r1 = 0;
      do {
        r1 = pick(np);
      } while (r1 == i);
      std::size_t r2 = 0;
      do {
        r2 = pick(np + archive.size());
      } while (r2 == i || r2 == r1);
      const auto& x2 = r2 < np ? pop[r2].x : archive[r2 - np];

      const std::size_t jrand = pick(n);
      const auto& xi = pop[i].x;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == jrand || u(rng) < cr) {
          trial[j] = xi[j] + f * (pop[pbest].x[j] - xi[j]) + f * (pop[r1].x[j] - x2[j]);
        } else {
          trial[j] = xi[j];
        }
      }
      detail::clamp_into(obj, trial);

      const double ft = obj(trial);
      if (ft <= pop[i].f) {
        if (ft < pop[i].f) {
          archive.push_back(pop[i].x);
          s_f.push_back(f);
          s_cr.push_back(cr);
          s_gain.push_back(pop[i].f - ft);
        }
        next[i].x = trial;
        next[i].f = ft;
      }
    }
    pop.swap(next);

    if (!s_f.empty()) {
      if (mem_cr[mem_k] == kTerminal || *std::max_element(s_cr.begin(), s_cr.end()) == 0.0) {
        mem_cr[mem_k] = kTerminal;
      } else {
        mem_cr[mem_k] = lehmer(s_cr, s_gain);
      }
      mem_f[mem_k] = lehmer(s_f, s_gain);
      mem_k = (mem_k + 1) % memory;
    }

    // Linear population reduction: drop the worst members.
    const std::size_t planned = lshade_population(pop_init, pop_min, obj.used(), budget);
    if (planned < pop.size()) {
      std::stable_sort(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.f < b.f; });
      pop.resize(planned);
    }
    capacity = capacity_for(pop.size());
    while (archive.size() > capacity) {
      const std::size_t victim = pick(archive.size());
      archive[victim].swap(archive.back());
      archive.pop_back();
    }

    if (on_generation) {
      on_generation(LshadeGeneration{stats.generations, pop.size(), archive.size(), capacity, obj.used()});
    }
  }

  stats.final_population = pop.size();
  return stats;
}

}  // namespace gbench
