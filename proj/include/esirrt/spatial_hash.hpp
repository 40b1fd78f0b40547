#pragma once

#include <cstddef>
#include <vector>

#include "esirrt/geometry.hpp"

namespace esirrt {

/// Uniform bucket grid over a rectangular extent for radius and nearest
/// queries. Points outside the extent are clamped into border buckets.
/// Insert-only; ids are whatever the caller assigns (usually node indices).
class SpatialHash {
 public:
  SpatialHash(double width, double height, double cell_size);

  void insert(std::size_t id, Point p);
  std::size_t size() const { return points_.size(); }

  /// Ids with squared distance <= radius^2, ascending.
  std::vector<std::size_t> within(Point p, double radius) const;

  /// Id at minimum distance; ties go to the lowest id. Requires size() > 0.
  std::size_t nearest(Point p) const;

 private:
  int bucket_x(double x) const;
  int bucket_y(double y) const;

  double cell_;
  int nx_;
  int ny_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::vector<Point> points_;  // indexed by id
};

}  // namespace esirrt
