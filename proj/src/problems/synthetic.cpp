#include "gbench/problems/synthetic.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "gbench/rng.hpp"

namespace gbench::synth {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return s;
}

double ripple_offset(std::size_t axis) {
  // Deterministic, away from the domain center and off the integer lattice.
  return 1.3 + 0.9 * std::sin(1.7 * static_cast<double>(axis) + 0.4);
}

double ripple(std::span<const double> x, const RippleParams& params) {
  double s = 0.0;
  std::uint64_t well = 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - ripple_offset(i);
    const double phase = params.frequency * z;
    s += params.bowl * z * z + params.amplitude * (1.0 - std::cos(2.0 * std::numbers::pi * phase));
    well = splitmix64(well ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(std::round(phase))));
  }
  const double u = static_cast<double>(well >> 11) * 0x1.0p-53;
  return s + params.depth * u;
}

double reference_offset(std::size_t axis) { return -2.2 + 0.45 * static_cast<double>(axis % 10); }

double reference_ellipsoid(std::span<const double> x) {
  const double n = x.size() > 1 ? static_cast<double>(x.size() - 1) : 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - reference_offset(i);
    s += std::pow(1e6, static_cast<double>(i) / n) * z * z;
  }
  return s;
}

Problem make_sphere(std::size_t dimension) {
  return Problem(fmt::format("sphere-{}D", dimension), "SYNTH", std::vector<double>(dimension, -5.0),
                 std::vector<double>(dimension, 5.0), sphere, {"unimodal"}, 0.0,
                 {{"function", "sphere"}});
}

Problem make_ripple(std::size_t dimension, const RippleParams& params) {
  return Problem(fmt::format("ripple-{}D", dimension), "SYNTH", std::vector<double>(dimension, -5.0),
                 std::vector<double>(dimension, 5.0),
                 [params](std::span<const double> x) { return ripple(x, params); }, {"multimodal"}, std::nullopt,
                 {{"function", "ripple"},
                  {"amplitude", params.amplitude},
                  {"frequency", params.frequency},
                  {"depth", params.depth},
                  {"bowl", params.bowl}});
}

Problem make_reference(std::size_t dimension) {
  return Problem(fmt::format("REF-{}D", dimension), "SYNTH", std::vector<double>(dimension, -5.0),
                 std::vector<double>(dimension, 5.0), reference_ellipsoid, {"unimodal", "reference"}, 0.0,
                 {{"function", "reference_ellipsoid"}});
}

}  // namespace gbench::synth
