#pragma once

#include <span>
#include <string>
#include <vector>

#include "gbench/problem.hpp"
#include "gbench/problems/geometry.hpp"

namespace gbench::pp {

/// A circle (sides == 0, size = radius) or a regular polygon (sides 3 or 4,
/// size = circumradius).
struct ShapeSpec {
  std::size_t sides = 0;
  double size = 1.0;

  bool is_circle() const { return sides == 0; }
  std::size_t variable_count() const { return is_circle() ? 2 : 3; }
};

struct PPInstance {
  double width = 10.0;
  double height = 10.0;
  std::vector<ShapeSpec> shapes;
  double center_weight = 1.0;
  double overlap_weight = 0.0;
  std::size_t samples_per_edge = 64;

  std::size_t variable_count() const;
  double diagonal() const;
  void validate() const;
};

/// Instance on a width x height sheet with overlap weight 100 * diagonal.
PPInstance make_instance(double width, double height, std::vector<ShapeSpec> shapes);

/// A placed shape: center, rotation, and for polygons the vertex ring.
struct PlacedShape {
  ShapeSpec spec;
  geom::Vec2 center;
  double rotation = 0.0;
  std::vector<geom::Vec2> vertices;

  double min_x() const;
  double max_x() const;
  double min_y() const;
  double max_y() const;
};

std::vector<PlacedShape> place(std::span<const double> x, const PPInstance& instance);

/// Lens area of two intersecting circles.
double circle_overlap_area(geom::Vec2 c1, double r1, geom::Vec2 c2, double r2);
/// Boundary-sample penetration measure for pairs involving a polygon:
/// sum of sample depths inside the other shape times sample spacing, both ways.
double penetration_overlap(const PlacedShape& a, const PlacedShape& b, std::size_t samples_per_edge);
double pair_overlap(const PlacedShape& a, const PlacedShape& b, std::size_t samples_per_edge);

struct PPBreakdown {
  double bbox_perimeter = 0.0;
  double center_distance = 0.0;
  double overlap = 0.0;
  double protrusion = 0.0;
  double fitness = 0.0;
};

PPBreakdown pp_evaluate(std::span<const double> x, const PPInstance& instance);
double pp_fitness(std::span<const double> x, const PPInstance& instance);

/// Bounds: centers on the sheet, polygon rotation in [0, 2 pi / sides].
Problem make_problem(std::string id, PPInstance instance);

}  // namespace gbench::pp
