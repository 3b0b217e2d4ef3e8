#pragma once

#include <cmath>
#include <numbers>

namespace lanetrace {

struct Point2 {
  double x{};
  double y{};

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

// Signed angle from direction a to direction b, in (-pi, pi]; counterclockwise positive.
inline double signed_angle(Point2 a, Point2 b) {
  double angle = std::atan2(cross(a, b), dot(a, b));
  if (angle <= -std::numbers::pi) angle = std::numbers::pi;
  return angle;
}

// Distance from p to the closed segment [a, b].
inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  double s = dot(p - a, ab) / len2;
  if (s < 0.0) s = 0.0;
  if (s > 1.0) s = 1.0;
  return distance(p, a + s * ab);
}

// Menger curvature of a point triple: 4 * area / (product of side lengths).
inline double menger_curvature(Point2 a, Point2 b, Point2 c) {
  const double ab = distance(a, b);
  const double bc = distance(b, c);
  const double ac = distance(a, c);
  const double denom = ab * bc * ac;
  if (denom == 0.0) return 0.0;
  // 4 * (|cross| / 2)
  return 2.0 * std::abs(cross(b - a, c - a)) / denom;
}

}  // namespace lanetrace
