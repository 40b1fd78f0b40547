#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "esirrt/geometry.hpp"
#include "esirrt/gridmap.hpp"

namespace esirrt {

/// One-pixel-wide medial skeleton of a grid's free space.
struct SkeletonGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // row-major, 1 = skeleton pixel

  bool at(int i, int j) const {
    return i >= 0 && j >= 0 && i < width && j < height &&
           cells[static_cast<std::size_t>(j) * width + i] != 0;
  }
  std::size_t count() const;

  /// The skeleton as an occupancy grid whose free cells are skeleton pixels.
  OccupancyGrid as_grid() const;
};

struct CornerSet {
  std::vector<Point> corners;  // pixel centres
};

struct HarrisParams {
  int block_size = 5;        // Gaussian window width (odd)
  double k = 0.04;
  double threshold = 0.01;   // fraction of the maximum response
  double nms_radius = 5.0;   // pixels
};

/// Zhang-Suen thinning of the free space. Each subiteration marks pixels by
/// the Zhang-Suen conditions, then removes them in raster order while they
/// remain simple points, so the 8-connected component structure survives
/// (the plain parallel rule erases 2x2 blocks entirely).
/// Throws EmptyFreeSpace when the grid has no free cell.
SkeletonGrid thin(const OccupancyGrid& grid);

/// Harris response det(M) - k trace(M)^2 of the skeleton raster (1 on the
/// skeleton, 0 elsewhere) using 3x3 Sobel gradients and a Gaussian window.
/// Borders are reflected (the edge pixel is not repeated).
std::vector<double> harris_response(const SkeletonGrid& skel, const HarrisParams& params);

/// Skeleton pixels whose response reaches `threshold * max response`, taken
/// greedily by decreasing response and kept at least `nms_radius` apart.
CornerSet harris_corners(const SkeletonGrid& skel, const HarrisParams& params = {});

/// Skeleton pixels with exactly one 8-neighbour on the skeleton.
std::vector<Point> skeleton_endpoints(const SkeletonGrid& skel);

/// Harris corners plus skeleton endpoints that are not within `nms_radius`
/// of a node already taken. These are the structural nodes of the map.
CornerSet structural_nodes(const SkeletonGrid& skel, const HarrisParams& params = {});

}  // namespace esirrt
