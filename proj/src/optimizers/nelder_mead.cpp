#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"
#include "gbench/optimizers.hpp"

namespace gbench {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

// Largest distance from the best vertex, each axis scaled by its bound range.
double normalized_diameter(const std::vector<Vertex>& simplex, const Objective& obj) {
  double d = 0.0;
  for (std::size_t v = 1; v < simplex.size(); ++v) {
    double s = 0.0;
    for (std::size_t i = 0; i < obj.dimension(); ++i) {
      const double r = (simplex[v].x[i] - simplex[0].x[i]) / (obj.upper()[i] - obj.lower()[i]);
      s += r * r;
    }
    d = std::max(d, std::sqrt(s));
  }
  return d;
}

}  // namespace

LocalSearchStats nelder_mead(Objective& obj, Rng& rng, const NelderMeadParams& params) {
  const std::size_t n = obj.dimension();
  const double ne = static_cast<double>(std::max<std::size_t>(n, 2));
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / ne;
  const double contract = 0.75 - 1.0 / (2.0 * ne);
  const double shrink = 1.0 - 1.0 / ne;

  LocalSearchStats stats;
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  auto point_along = [&](std::vector<double>& out, const std::vector<double>& from, double t,
                         const std::vector<double>& to) {
    // out = from + t * (to - from)
    for (std::size_t i = 0; i < n; ++i) out[i] = from[i] + t * (to[i] - from[i]);
    detail::clamp_into(obj, out);
  };

  for (bool first = true; !obj.exhausted(); first = false) {
    if (!first) {
      ++stats.restarts;
    }
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    auto x0 = detail::uniform_point(obj, rng);
    simplex.push_back({x0, obj(x0)});
    for (std::size_t i = 0; i < n && !obj.exhausted(); ++i) {
      auto xi = x0;
      const double step = params.step_init * (obj.upper()[i] - obj.lower()[i]);
      xi[i] = (xi[i] + step <= obj.upper()[i]) ? xi[i] + step : xi[i] - step;
      simplex.push_back({xi, obj(xi)});
    }
    if (simplex.size() < n + 1) {
      return stats;
    }

    while (!obj.exhausted()) {
      std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
      if (normalized_diameter(simplex, obj) < params.collapse_tol) {
        break;
      }
      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);
      }
      Vertex& worst = simplex[n];
      const double f_best = simplex[0].f;
      const double f_second = simplex[n - 1].f;

      point_along(xr, centroid, -reflect, worst.x);
      const double fr = obj(xr);
      if (fr < f_best) {
        if (obj.exhausted()) {
          worst = {xr, fr};
          break;
        }
        point_along(xe, centroid, expand, xr);
        const double fe = obj(xe);
        worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        continue;
      }
      if (fr < f_second) {
        worst = {xr, fr};
        continue;
      }
      if (obj.exhausted()) {
        break;
      }
      const bool outside = fr < worst.f;
      point_along(xc, centroid, contract, outside ? xr : worst.x);
      const double fc = obj(xc);
      if (outside ? fc <= fr : fc < worst.f) {
        worst = {xc, fc};
        continue;
      }
      for (std::size_t v = 1; v <= n && !obj.exhausted(); ++v) {
        point_along(simplex[v].x, simplex[0].x, shrink, simplex[v].x);
        simplex[v].f = obj(simplex[v].x);
      }
    }
  }
  return stats;
}

}  // namespace gbench
