#include "gbench/problems/ergodic_coverage.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "gbench/error.hpp"

namespace gbench::ec {

using geom::Vec2;

void DensityGrid::validate() const {
  if (nx == 0 || ny == 0 || values.size() != nx * ny) {
    throw Error(ErrorKind::InvalidInput, "density grid is not rectangular");
  }
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) {
      throw Error(ErrorKind::InvalidInput, "density grid has negative cells");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidInput, fmt::format("density grid sums to {}", total));
  }
}

DensityGrid uniform_density(std::size_t nx, std::size_t ny) {
  return {nx, ny, std::vector<double>(nx * ny, 1.0 / static_cast<double>(nx * ny))};
}

DensityGrid gaussian_mixture(std::size_t nx, std::size_t ny, std::span<const Blob> blobs) {
  DensityGrid g{nx, ny, std::vector<double>(nx * ny, 0.0)};
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Vec2 c{(static_cast<double>(ix) + 0.5) / static_cast<double>(nx),
                   (static_cast<double>(iy) + 0.5) / static_cast<double>(ny)};
      double v = 0.0;
      for (const auto& b : blobs) {
        const Vec2 d = c - b.center;
        v += b.weight * std::exp(-0.5 * geom::dot(d, d) / (b.sigma * b.sigma));
      }
      g.values[iy * nx + ix] = v;
    }
  }
  const double total = std::accumulate(g.values.begin(), g.values.end(), 0.0);
  for (auto& v : g.values) {
    v /= total;
  }
  return g;
}

void ECInstance::validate() const {
  goal.validate();
  if (segments < 1 || !(segment_length > 0.0) || samples_per_segment < 1 || spectral_order < 1) {
    throw Error(ErrorKind::InvalidInput, "invalid ergodic coverage instance");
  }
}

std::vector<Vec2> ec_path(std::span<const double> angles, const ECInstance& instance) {
  if (angles.size() != instance.segments) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("expected {} angles, got {}", instance.segments, angles.size()));
  }
  std::vector<Vec2> path(instance.segments + 1);
  path[0] = instance.start;
  double heading = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    heading += angles[i];
    path[i + 1] = path[i] + instance.segment_length * Vec2{std::cos(heading), std::sin(heading)};
  }
  return path;
}

std::vector<Vec2> sample_path(std::span<const Vec2> path, std::size_t per_segment) {
  std::vector<Vec2> out;
  if (path.size() < 2) {
    return out;
  }
  out.reserve((path.size() - 1) * per_segment);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec2 a = path[i - 1];
    const Vec2 d = path[i] - a;
    for (std::size_t k = 0; k < per_segment; ++k) {
      const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(per_segment);
      out.push_back(a + t * d);
    }
  }
  return out;
}

namespace {

bool inside_unit_square(Vec2 p) { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

double outside_distance(Vec2 p) {
  const double dx = std::max({0.0, -p.x, p.x - 1.0});
  const double dy = std::max({0.0, -p.y, p.y - 1.0});
  return std::hypot(dx, dy);
}

std::size_t cell_index(double v, std::size_t n) {
  return std::min(static_cast<std::size_t>(v * static_cast<double>(n)), n - 1);
}

}  // namespace

std::vector<double> visit_histogram(std::span<const Vec2> samples, std::size_t nx, std::size_t ny) {
  std::vector<double> h(nx * ny, 0.0);
  if (samples.empty()) {
    return h;
  }
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const auto& p : samples) {
    if (inside_unit_square(p)) {
      h[cell_index(p.y, ny) * nx + cell_index(p.x, nx)] += w;
    }
  }
  return h;
}

double direct_metric(std::span<const Vec2> samples, const DensityGrid& goal) {
  const auto h = visit_histogram(samples, goal.nx, goal.ny);
  double l1 = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    l1 += std::abs(goal.values[i] - h[i]);
  }
  return l1;
}

namespace {

// Mean of sqrt(2) cos(k pi x) over [a, b]; 1 for k = 0.
double cell_mean_basis(std::size_t k, double a, double b) {
  if (k == 0) {
    return 1.0;
  }
  const double w = static_cast<double>(k) * std::numbers::pi;
  return std::numbers::sqrt2 * (std::sin(w * b) - std::sin(w * a)) / (w * (b - a));
}

}  // namespace

SpectralBasis::SpectralBasis(std::size_t order, const DensityGrid& goal)
    : order_(order), goal_(order * order, 0.0), weights_(order * order, 0.0) {
  goal.validate();
  for (std::size_t ky = 0; ky < order; ++ky) {
    for (std::size_t kx = 0; kx < order; ++kx) {
      const double k2 = static_cast<double>(kx * kx + ky * ky);
      weights_[ky * order + kx] = std::pow(1.0 + k2, -1.5);
      double c = 0.0;
      for (std::size_t iy = 0; iy < goal.ny; ++iy) {
        const double y0 = static_cast<double>(iy) / static_cast<double>(goal.ny);
        const double y1 = static_cast<double>(iy + 1) / static_cast<double>(goal.ny);
        const double by = cell_mean_basis(ky, y0, y1);
        for (std::size_t ix = 0; ix < goal.nx; ++ix) {
          const double x0 = static_cast<double>(ix) / static_cast<double>(goal.nx);
          const double x1 = static_cast<double>(ix + 1) / static_cast<double>(goal.nx);
          c += goal.at(ix, iy) * by * cell_mean_basis(kx, x0, x1);
        }
      }
      goal_[ky * order + kx] = c;
    }
  }
}

std::vector<double> SpectralBasis::trajectory_coefficients(std::span<const Vec2> samples) const {
  std::vector<double> c(order_ * order_, 0.0);
  if (samples.empty()) {
    return c;
  }
  std::vector<double> bx(order_), by(order_);
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const auto& p : samples) {
    if (!inside_unit_square(p)) {
      continue;
    }
    for (std::size_t k = 0; k < order_; ++k) {
      const double f = static_cast<double>(k) * std::numbers::pi;
      bx[k] = k == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(f * p.x);
      by[k] = k == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(f * p.y);
    }
    for (std::size_t ky = 0; ky < order_; ++ky) {
      for (std::size_t kx = 0; kx < order_; ++kx) {
        c[ky * order_ + kx] += w * bx[kx] * by[ky];
      }
    }
  }
  return c;
}

double SpectralBasis::metric(std::span<const Vec2> samples) const {
  const auto c = trajectory_coefficients(samples);
  double m = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    m += weights_[i] * (c[i] - goal_[i]) * (c[i] - goal_[i]);
  }
  return m;
}

ECBreakdown ec_evaluate(std::span<const double> angles, const ECInstance& instance, const SpectralBasis* basis) {
  const auto path = ec_path(angles, instance);
  const auto samples = sample_path(path, instance.samples_per_segment);
  ECBreakdown out;
  double outside = 0.0;
  for (const auto& p : samples) {
    outside += outside_distance(p);
  }
  out.boundary_penalty = instance.boundary_weight * outside / static_cast<double>(samples.size());
  if (instance.metric == MetricKind::Direct) {
    out.metric = direct_metric(samples, instance.goal);
  } else if (basis != nullptr) {
    out.metric = basis->metric(samples);
  } else {
    out.metric = SpectralBasis(instance.spectral_order, instance.goal).metric(samples);
  }
  return out;
}

double ec_fitness(std::span<const double> angles, const ECInstance& instance) {
  return ec_evaluate(angles, instance).fitness();
}

Problem make_problem(std::string id, ECInstance instance) {
  instance.validate();
  nlohmann::json params = {{"start", {instance.start.x, instance.start.y}},
                           {"segment_length", instance.segment_length},
                           {"segments", instance.segments},
                           {"grid", {instance.goal.nx, instance.goal.ny}},
                           {"metric", instance.metric == MetricKind::Direct ? "direct" : "spectral"},
                           {"spectral_order", instance.spectral_order},
                           {"samples_per_segment", instance.samples_per_segment}};
  std::shared_ptr<const SpectralBasis> basis;
  if (instance.metric == MetricKind::Spectral) {
    basis = std::make_shared<const SpectralBasis>(instance.spectral_order, instance.goal);
  }
  const std::size_t d = instance.segments;
  return Problem(
      std::move(id), "EC", std::vector<double>(d, -std::numbers::pi), std::vector<double>(d, std::numbers::pi),
      [inst = std::move(instance), basis](std::span<const double> x) {
        return ec_evaluate(x, inst, basis.get()).fitness();
      },
      {}, std::nullopt, std::move(params));
}

}  // namespace gbench::ec
