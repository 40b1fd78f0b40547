#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace esirrt {

/// Continuous pixel coordinate. Origin at the top-left corner of the map,
/// x grows rightward and y downward; cell (i, j) covers [i, i+1) x [j, j+1).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline bool nearly_equal(Point a, Point b, double tol = 1e-9) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

/// Ordered waypoint sequence. Consecutive points are expected to be distinct.
using Path = std::vector<Point>;

/// Sum of Euclidean segment lengths; 0 for a single point.
double path_length(std::span<const Point> path);

}  // namespace esirrt
