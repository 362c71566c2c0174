#pragma once

#include <span>

#include "gbench/problem.hpp"

namespace gbench::synth {

double sphere(std::span<const double> x);

/// Offset bowl with a fine ripple whose wells sit at pseudo-random depths:
///   sum_i [b z_i^2 + A (1 - cos(2 pi w z_i))] + H u(round(w z)),  z = x - o,
/// with u a hash of the well index into [0, 1). Local descent gains little
/// against the spread of well depths, so restarts of a local method do
/// worse than plain sampling.
struct RippleParams {
  double amplitude = 0.05;
  double frequency = 2.0;
  double depth = 20.0;
  double bowl = 0.2;
};
double ripple(std::span<const double> x, const RippleParams& params = {});
double ripple_offset(std::size_t axis);

/// Offset ill-conditioned ellipsoid used as the timing reference function.
double reference_ellipsoid(std::span<const double> x);
double reference_offset(std::size_t axis);

Problem make_sphere(std::size_t dimension);
Problem make_ripple(std::size_t dimension, const RippleParams& params = {});
Problem make_reference(std::size_t dimension = 10);

}  // namespace gbench::synth
