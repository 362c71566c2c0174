#pragma once

#include <cmath>

namespace gbench::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Length of the part of segment [a, b] lying inside the disc (center, radius).
inline double segment_chord_in_circle(Vec2 a, Vec2 b, Vec2 center, double radius) {
  const Vec2 d = b - a;
  const Vec2 f = a - center;
  const double qa = dot(d, d);
  if (qa == 0.0) {
    return 0.0;
  }
  const double qb = 2.0 * dot(f, d);
  const double qc = dot(f, f) - radius * radius;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) {
    return 0.0;
  }
  const double s = std::sqrt(disc);
  double t0 = (-qb - s) / (2.0 * qa);
  double t1 = (-qb + s) / (2.0 * qa);
  t0 = t0 < 0.0 ? 0.0 : t0;
  t1 = t1 > 1.0 ? 1.0 : t1;
  return t1 > t0 ? (t1 - t0) * std::sqrt(qa) : 0.0;
}

}  // namespace gbench::geom
