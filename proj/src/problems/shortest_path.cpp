#include "gbench/problems/shortest_path.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "gbench/error.hpp"

namespace gbench::sp {

using geom::Vec2;

void SPInstance::validate() const {
  if (segments < 2) {
    throw Error(ErrorKind::InvalidInput, "shortest path needs at least 2 segments");
  }
  if (start == end) {
    throw Error(ErrorKind::InvalidInput, "shortest path start and end coincide");
  }
  for (const auto& o : obstacles) {
    if (!(o.radius > 0.0)) {
      throw Error(ErrorKind::InvalidInput, "obstacle radius must be positive");
    }
  }
}

SPInstance make_instance(Vec2 start, Vec2 end, std::vector<Obstacle> obstacles, std::size_t segments) {
  SPInstance inst{start, end, std::move(obstacles), segments, 0.0};
  inst.penalty_coeff = 10.0 * inst.straight_distance();
  inst.validate();
  return inst;
}

std::vector<Vec2> sp_path(std::span<const double> angles, const SPInstance& instance) {
  if (angles.size() != instance.segments) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("expected {} angles, got {}", instance.segments, angles.size()));
  }
  std::vector<Vec2> unit(instance.segments + 1);
  double heading = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    heading += angles[i];
    unit[i + 1] = unit[i] + Vec2{std::cos(heading), std::sin(heading)};
  }
  const Vec2 chord = unit.back();
  const double chord_len = geom::norm(chord);
  if (chord_len < 1e-6 * static_cast<double>(instance.segments)) {
    throw Error(ErrorKind::DegeneratePath, fmt::format("unit path chord {} too short", chord_len));
  }
  const Vec2 target = instance.end - instance.start;
  const double scale = geom::norm(target) / chord_len;
  const double rot = std::atan2(target.y, target.x) - std::atan2(chord.y, chord.x);
  const double c = scale * std::cos(rot);
  const double s = scale * std::sin(rot);
  for (auto& p : unit) {
    p = instance.start + Vec2{c * p.x - s * p.y, s * p.x + c * p.y};
  }
  unit.back() = instance.end;
  return unit;
}

double path_length(std::span<const Vec2> path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    len += geom::norm(path[i] - path[i - 1]);
  }
  return len;
}

double collision_length(std::span<const Vec2> path, std::span<const Obstacle> obstacles) {
  double inside = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    for (const auto& o : obstacles) {
      inside += geom::segment_chord_in_circle(path[i - 1], path[i], o.center, o.radius);
    }
  }
  return inside;
}

double sp_fitness(std::span<const double> angles, const SPInstance& instance) {
  try {
    const auto path = sp_path(angles, instance);
    return path_length(path) + instance.penalty_coeff * collision_length(path, instance.obstacles);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegeneratePath) {
      throw;
    }
    return 1e3 * instance.straight_distance();
  }
}

Problem make_problem(std::string id, SPInstance instance) {
  instance.validate();
  nlohmann::json obstacles = nlohmann::json::array();
  for (const auto& o : instance.obstacles) {
    obstacles.push_back({{"center", {o.center.x, o.center.y}}, {"radius", o.radius}});
  }
  nlohmann::json params = {{"start", {instance.start.x, instance.start.y}},
                           {"end", {instance.end.x, instance.end.y}},
                           {"segments", instance.segments},
                           {"penalty_coeff", instance.penalty_coeff},
                           {"obstacles", obstacles}};
  const std::size_t d = instance.segments;
  std::optional<double> known;
  if (instance.obstacles.empty()) {
    known = instance.straight_distance();
  }
  return Problem(std::move(id), "SP", std::vector<double>(d, -std::numbers::pi),
                 std::vector<double>(d, std::numbers::pi),
                 [inst = std::move(instance)](std::span<const double> x) { return sp_fitness(x, inst); }, {},
                 known, std::move(params));
}

}  // namespace gbench::sp
