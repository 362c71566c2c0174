#pragma once

#include <span>
#include <string>
#include <vector>

#include "gbench/problem.hpp"
#include "gbench/problems/geometry.hpp"

namespace gbench::sp {

struct Obstacle {
  geom::Vec2 center;
  double radius = 0.0;
};

struct SPInstance {
  geom::Vec2 start;
  geom::Vec2 end;
  std::vector<Obstacle> obstacles;
  std::size_t segments = 2;
  double penalty_coeff = 0.0;

  void validate() const;
  double straight_distance() const { return geom::norm(end - start); }
};

/// Instance with penalty coefficient 10 * |end - start|.
SPInstance make_instance(geom::Vec2 start, geom::Vec2 end, std::vector<Obstacle> obstacles,
                         std::size_t segments);

/// Polyline of `segments` equal segments with cumulative relative headings,
/// mapped by a similarity transform onto start -> end. Throws
/// Error(DegeneratePath) when the unit path's chord is too short.
std::vector<geom::Vec2> sp_path(std::span<const double> angles, const SPInstance& instance);

double path_length(std::span<const geom::Vec2> path);
/// Sum over segments and obstacles of the segment length inside the obstacle.
double collision_length(std::span<const geom::Vec2> path, std::span<const Obstacle> obstacles);

double sp_fitness(std::span<const double> angles, const SPInstance& instance);

Problem make_problem(std::string id, SPInstance instance);

}  // namespace gbench::sp
