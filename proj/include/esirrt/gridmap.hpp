#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "esirrt/geometry.hpp"

namespace esirrt {

inline constexpr int kDefaultFreeThreshold = 127;

/// Binary occupancy raster, row-major, immutable once constructed.
class OccupancyGrid {
 public:
  /// `free_mask` holds one byte per cell, non-zero meaning free.
  OccupancyGrid(int width, int height, std::vector<std::uint8_t> free_mask);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t free_count() const { return free_count_; }
  std::size_t cell_count() const { return cells_.size(); }

  bool in_bounds(int i, int j) const { return i >= 0 && j >= 0 && i < width_ && j < height_; }

  /// Free test for a cell index; out-of-bounds cells count as occupied.
  bool cell_free(int i, int j) const {
    return in_bounds(i, j) && cells_[static_cast<std::size_t>(j) * width_ + i] != 0;
  }

  std::span<const std::uint8_t> cells() const { return cells_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
  std::size_t free_count_ = 0;
};

/// Decode a binary (P5) PGM. A cell is free iff its grey value, rescaled to
/// 0..255 when maxval differs from 255, is at least `free_threshold`.
OccupancyGrid load_pgm(std::span<const std::uint8_t> bytes,
                       int free_threshold = kDefaultFreeThreshold);

OccupancyGrid load_pgm_file(const std::filesystem::path& path,
                            int free_threshold = kDefaultFreeThreshold);

/// Encode as P5 with free = 255, occupied = 0.
std::vector<std::uint8_t> encode_pgm(const OccupancyGrid& grid);

/// Grow every occupied cell by a square of the given radius (in cells).
OccupancyGrid inflate(const OccupancyGrid& grid, int radius);

/// True iff floor(p) is an in-bounds free cell.
bool is_free(const OccupancyGrid& grid, Point p);

/// Conservative segment test: every cell whose closed square the segment
/// touches must be in bounds and free. Symmetric in its endpoints.
bool obstacle_free(const OccupancyGrid& grid, Point a, Point b);

/// True iff every consecutive segment of `path` is obstacle-free.
bool path_obstacle_free(const OccupancyGrid& grid, std::span<const Point> path);

}  // namespace esirrt
