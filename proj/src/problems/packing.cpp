#include "gbench/problems/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "gbench/error.hpp"

namespace gbench::pp {

using geom::Vec2;

std::size_t PPInstance::variable_count() const {
  std::size_t n = 0;
  for (const auto& s : shapes) {
    n += s.variable_count();
  }
  return n;
}

double PPInstance::diagonal() const { return std::hypot(width, height); }

void PPInstance::validate() const {
  if (!(width > 0.0 && height > 0.0) || shapes.empty()) {
    throw Error(ErrorKind::InvalidInput, "packing instance needs a sheet and at least one shape");
  }
  for (const auto& s : shapes) {
    if (!(s.size > 0.0) || !(s.sides == 0 || s.sides == 3 || s.sides == 4)) {
      throw Error(ErrorKind::InvalidInput, "packing shapes are circles, triangles or squares");
    }
  }
}

PPInstance make_instance(double width, double height, std::vector<ShapeSpec> shapes) {
  PPInstance inst{width, height, std::move(shapes)};
  inst.overlap_weight = 100.0 * inst.diagonal();
  inst.validate();
  return inst;
}

double PlacedShape::min_x() const {
  if (spec.is_circle()) return center.x - spec.size;
  return std::min_element(vertices.begin(), vertices.end(), [](Vec2 a, Vec2 b) { return a.x < b.x; })->x;
}
double PlacedShape::max_x() const {
  if (spec.is_circle()) return center.x + spec.size;
  return std::max_element(vertices.begin(), vertices.end(), [](Vec2 a, Vec2 b) { return a.x < b.x; })->x;
}
double PlacedShape::min_y() const {
  if (spec.is_circle()) return center.y - spec.size;
  return std::min_element(vertices.begin(), vertices.end(), [](Vec2 a, Vec2 b) { return a.y < b.y; })->y;
}
double PlacedShape::max_y() const {
  if (spec.is_circle()) return center.y + spec.size;
  return std::max_element(vertices.begin(), vertices.end(), [](Vec2 a, Vec2 b) { return a.y < b.y; })->y;
}

std::vector<PlacedShape> place(std::span<const double> x, const PPInstance& instance) {
  if (x.size() != instance.variable_count()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("expected {} packing variables, got {}", instance.variable_count(), x.size()));
  }
  std::vector<PlacedShape> out;
  out.reserve(instance.shapes.size());
  std::size_t k = 0;
  for (const auto& spec : instance.shapes) {
    PlacedShape s{spec, {x[k], x[k + 1]}, 0.0, {}};
    if (!spec.is_circle()) {
      s.rotation = x[k + 2];
      s.vertices.resize(spec.sides);
      for (std::size_t v = 0; v < spec.sides; ++v) {
        const double a = s.rotation + 2.0 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(spec.sides);
        s.vertices[v] = s.center + spec.size * Vec2{std::cos(a), std::sin(a)};
      }
    }
    k += spec.variable_count();
    out.push_back(std::move(s));
  }
  return out;
}

double circle_overlap_area(Vec2 c1, double r1, Vec2 c2, double r2) {
  const double d = geom::norm(c2 - c1);
  if (d >= r1 + r2) {
    return 0.0;
  }
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return std::numbers::pi * r * r;
  }
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double kite = 0.5 * std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)));
  return r1 * r1 * a1 + r2 * r2 * a2 - kite;
}

namespace {

// Depth of p inside the shape, 0 if outside.
double penetration_depth(Vec2 p, const PlacedShape& s) {
  if (s.spec.is_circle()) {
    return std::max(0.0, s.spec.size - geom::norm(p - s.center));
  }
  // Counter-clockwise convex ring: inside iff left of every edge.
  double depth = std::numeric_limits<double>::infinity();
  const std::size_t n = s.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = s.vertices[i];
    const Vec2 b = s.vertices[(i + 1) % n];
    const Vec2 e = b - a;
    const double dist = geom::cross(e, p - a) / geom::norm(e);
    if (dist <= 0.0) {
      return 0.0;
    }
    depth = std::min(depth, dist);
  }
  return depth;
}

template <typename Fn>
void for_each_boundary_sample(const PlacedShape& s, std::size_t per_edge, Fn&& fn) {
  if (s.spec.is_circle()) {
    // Same sample density as a square of the same circumradius.
    const std::size_t n = 4 * per_edge;
    const double spacing = 2.0 * std::numbers::pi * s.spec.size / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double a = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      fn(s.center + s.spec.size * Vec2{std::cos(a), std::sin(a)}, spacing);
    }
    return;
  }
  const std::size_t n = s.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = s.vertices[i];
    const Vec2 e = s.vertices[(i + 1) % n] - a;
    const double spacing = geom::norm(e) / static_cast<double>(per_edge);
    for (std::size_t k = 0; k < per_edge; ++k) {
      fn(a + ((static_cast<double>(k) + 0.5) / static_cast<double>(per_edge)) * e, spacing);
    }
  }
}

bool bboxes_disjoint(const PlacedShape& a, const PlacedShape& b) {
  return a.max_x() < b.min_x() || b.max_x() < a.min_x() || a.max_y() < b.min_y() || b.max_y() < a.min_y();
}

}  // namespace

double penetration_overlap(const PlacedShape& a, const PlacedShape& b, std::size_t samples_per_edge) {
  double total = 0.0;
  for_each_boundary_sample(a, samples_per_edge, [&](Vec2 p, double ds) { total += penetration_depth(p, b) * ds; });
  for_each_boundary_sample(b, samples_per_edge, [&](Vec2 p, double ds) { total += penetration_depth(p, a) * ds; });
  return total;
}

double pair_overlap(const PlacedShape& a, const PlacedShape& b, std::size_t samples_per_edge) {
  if (bboxes_disjoint(a, b)) {
    return 0.0;
  }
  if (a.spec.is_circle() && b.spec.is_circle()) {
    return circle_overlap_area(a.center, a.spec.size, b.center, b.spec.size);
  }
  return penetration_overlap(a, b, samples_per_edge);
}

PPBreakdown pp_evaluate(std::span<const double> x, const PPInstance& instance) {
  const auto shapes = place(x, instance);
  PPBreakdown out;
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const auto& s : shapes) {
    const double sx0 = s.min_x(), sx1 = s.max_x(), sy0 = s.min_y(), sy1 = s.max_y();
    lo_x = std::min(lo_x, sx0);
    hi_x = std::max(hi_x, sx1);
    lo_y = std::min(lo_y, sy0);
    hi_y = std::max(hi_y, sy1);
    out.protrusion += std::max(0.0, -sx0) + std::max(0.0, sx1 - instance.width) + std::max(0.0, -sy0) +
                      std::max(0.0, sy1 - instance.height);
  }
  out.bbox_perimeter = 2.0 * ((hi_x - lo_x) + (hi_y - lo_y));
  out.center_distance = std::hypot(0.5 * (lo_x + hi_x) - 0.5 * instance.width, 0.5 * (lo_y + hi_y) - 0.5 * instance.height);
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < shapes.size(); ++j) {
      out.overlap += pair_overlap(shapes[i], shapes[j], instance.samples_per_edge);
    }
  }
  out.fitness = out.bbox_perimeter + instance.center_weight * out.center_distance +
                instance.overlap_weight * (out.overlap + out.protrusion);
  return out;
}

double pp_fitness(std::span<const double> x, const PPInstance& instance) { return pp_evaluate(x, instance).fitness; }

Problem make_problem(std::string id, PPInstance instance) {
  instance.validate();
  std::vector<double> lo, hi;
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& s : instance.shapes) {
    lo.push_back(0.0);
    hi.push_back(instance.width);
    lo.push_back(0.0);
    hi.push_back(instance.height);
    if (!s.is_circle()) {
      lo.push_back(0.0);
      hi.push_back(2.0 * std::numbers::pi / static_cast<double>(s.sides));
    }
    shapes.push_back({{"sides", s.sides}, {"size", s.size}});
  }
  nlohmann::json params = {{"sheet", {instance.width, instance.height}},
                           {"shapes", shapes},
                           {"center_weight", instance.center_weight},
                           {"overlap_weight", instance.overlap_weight},
                           {"samples_per_edge", instance.samples_per_edge}};
  std::optional<double> known;
  if (instance.shapes.size() == 1 && instance.shapes[0].is_circle()) {
    known = 8.0 * instance.shapes[0].size;
  }
  return Problem(std::move(id), "PP", std::move(lo), std::move(hi),
                 [inst = std::move(instance)](std::span<const double> v) { return pp_fitness(v, inst); }, {}, known,
                 std::move(params));
}

}  // namespace gbench::pp
