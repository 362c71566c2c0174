#pragma once

#include <span>
#include <string>
#include <vector>

#include "gbench/problem.hpp"
#include "gbench/problems/geometry.hpp"

namespace gbench::ec {

/// Piecewise-constant density over the unit square, row-major (y outer).
struct DensityGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;

  double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }
  /// Throws unless rectangular, nonnegative and summing to 1 within 1e-9.
  void validate() const;
};

DensityGrid uniform_density(std::size_t nx, std::size_t ny);
/// Normalized mixture of isotropic Gaussians sampled at cell centers.
struct Blob {
  geom::Vec2 center;
  double sigma = 0.1;
  double weight = 1.0;
};
DensityGrid gaussian_mixture(std::size_t nx, std::size_t ny, std::span<const Blob> blobs);

enum class MetricKind { Direct, Spectral };

struct ECInstance {
  geom::Vec2 start;
  double segment_length = 0.1;
  std::size_t segments = 2;
  DensityGrid goal;
  MetricKind metric = MetricKind::Direct;
  std::size_t spectral_order = 8;
  std::size_t samples_per_segment = 10;
  double boundary_weight = 1.0;

  void validate() const;
};

/// Open polyline from `start` with fixed segment length and cumulative
/// relative headings starting at heading 0.
std::vector<geom::Vec2> ec_path(std::span<const double> angles, const ECInstance& instance);

/// Points spaced uniformly along the path (midpoints of equal sub-steps).
std::vector<geom::Vec2> sample_path(std::span<const geom::Vec2> path, std::size_t per_segment);

/// Cell-visit histogram of the samples normalized by the total sample count;
/// samples outside the unit square are not binned.
std::vector<double> visit_histogram(std::span<const geom::Vec2> samples, std::size_t nx, std::size_t ny);

/// L1 distance between goal density and the visit histogram, in [0, 2].
double direct_metric(std::span<const geom::Vec2> samples, const DensityGrid& goal);

/// Cosine-basis coefficients and Sobolev weights for k in [0, order)^2.
class SpectralBasis {
 public:
  SpectralBasis(std::size_t order, const DensityGrid& goal);

  std::size_t order() const noexcept { return order_; }
  std::span<const double> goal_coefficients() const noexcept { return goal_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::vector<double> trajectory_coefficients(std::span<const geom::Vec2> samples) const;
  /// Sum_k weight_k (c_k - phi_k)^2.
  double metric(std::span<const geom::Vec2> samples) const;

 private:
  std::size_t order_;
  std::vector<double> goal_;
  std::vector<double> weights_;
};

struct ECBreakdown {
  double metric = 0.0;
  double boundary_penalty = 0.0;
  double fitness() const { return metric + boundary_penalty; }
};

ECBreakdown ec_evaluate(std::span<const double> angles, const ECInstance& instance,
                        const SpectralBasis* basis = nullptr);
double ec_fitness(std::span<const double> angles, const ECInstance& instance);

Problem make_problem(std::string id, ECInstance instance);

}  // namespace gbench::ec
