#include "esirrt/spatial_hash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "esirrt/error.hpp"

namespace esirrt {

SpatialHash::SpatialHash(double width, double height, double cell_size) : cell_(cell_size) {
  if (!(cell_size > 0.0)) throw InvalidParameter("spatial hash cell size must be positive");
  nx_ = std::max(1, static_cast<int>(std::ceil(width / cell_size)));
  ny_ = std::max(1, static_cast<int>(std::ceil(height / cell_size)));
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
}

int SpatialHash::bucket_x(double x) const {
  return std::clamp(static_cast<int>(std::floor(x / cell_)), 0, nx_ - 1);
}

int SpatialHash::bucket_y(double y) const {
  return std::clamp(static_cast<int>(std::floor(y / cell_)), 0, ny_ - 1);
}

void SpatialHash::insert(std::size_t id, Point p) {
  if (id >= points_.size()) points_.resize(id + 1);
  points_[id] = p;
  buckets_[static_cast<std::size_t>(bucket_y(p.y)) * nx_ + bucket_x(p.x)].push_back(id);
}

std::vector<std::size_t> SpatialHash::within(Point p, double radius) const {
  std::vector<std::size_t> out;
  if (radius < 0.0) return out;
  const double r2 = radius * radius;
  const int x0 = bucket_x(p.x - radius), x1 = bucket_x(p.x + radius);
  const int y0 = bucket_y(p.y - radius), y1 = bucket_y(p.y + radius);
  for (int by = y0; by <= y1; ++by) {
    for (int bx = x0; bx <= x1; ++bx) {
      for (auto id : buckets_[static_cast<std::size_t>(by) * nx_ + bx]) {
        if (squared_distance(points_[id], p) <= r2) out.push_back(id);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SpatialHash::nearest(Point p) const {
  const int cx = bucket_x(p.x);
  const int cy = bucket_y(p.y);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  auto visit = [&](int bx, int by) {
    for (auto id : buckets_[static_cast<std::size_t>(by) * nx_ + bx]) {
      const double d2 = squared_distance(points_[id], p);
      if (d2 < best_d2 || (d2 == best_d2 && id < best)) {
        best = id;
        best_d2 = d2;
      }
    }
  };
  // Distance from p to the outside of its own bucket, for the ring bound.
  const double bx_lo = std::max(0.0, p.x - cx * cell_);
  const double bx_hi = std::max(0.0, (cx + 1) * cell_ - p.x);
  const double by_lo = std::max(0.0, p.y - cy * cell_);
  const double by_hi = std::max(0.0, (cy + 1) * cell_ - p.y);
  const double inner = std::min({bx_lo, bx_hi, by_lo, by_hi});
  const int max_ring = std::max(nx_, ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    for (int by = cy - ring; by <= cy + ring; ++by) {
      if (by < 0 || by >= ny_) continue;
      const bool edge_row = by == cy - ring || by == cy + ring;
      for (int bx = cx - ring; bx <= cx + ring; bx += (edge_row ? 1 : 2 * ring)) {
        if (bx >= 0 && bx < nx_) visit(bx, by);
        if (ring == 0) break;
      }
    }
    // Anything in ring + 1 or beyond is at least inner + ring * cell away;
    // clamping only pushes stored points further out.
    const double bound = inner + ring * cell_;
    if (best_d2 < std::numeric_limits<double>::infinity() && best_d2 < bound * bound) break;
  }
  return best;
}

}  // namespace esirrt
