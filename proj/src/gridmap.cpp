#include "esirrt/gridmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>

#include "esirrt/error.hpp"

namespace esirrt {

double path_length(std::span<const Point> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += distance(path[i - 1], path[i]);
  return total;
}

OccupancyGrid::OccupancyGrid(int width, int height, std::vector<std::uint8_t> free_mask)
    : width_(width), height_(height), cells_(std::move(free_mask)) {
  if (width < 1 || height < 1) throw InvalidParameter("grid dimensions must be positive");
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw InvalidParameter("grid cell count does not match dimensions");
  for (auto& c : cells_) {
    c = c != 0 ? 1 : 0;
    free_count_ += c;
  }
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) throw ParseError(std::string("PGM ") + what + " too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw ParseError(std::string("PGM header: expected ") + what);
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

OccupancyGrid load_pgm(std::span<const std::uint8_t> bytes, int free_threshold) {
  if (free_threshold < 0 || free_threshold > 255)
    throw InvalidParameter("free threshold must lie in 0..255");
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw ParseError("not a binary PGM (missing P5 magic)");

  HeaderReader reader(bytes.subspan(2));
  const long width = reader.read_uint("width");
  const long height = reader.read_uint("height");
  const long maxval = reader.read_uint("maxval");
  if (width == 0 || height == 0) throw ParseError("PGM has zero dimensions");
  if (maxval == 0 || maxval > 255) throw ParseError("PGM maxval must lie in 1..255");

  // Exactly one whitespace byte separates the header from the raster.
  const std::size_t sep = 2 + reader.pos();
  if (sep >= bytes.size() || !std::isspace(bytes[sep]))
    throw ParseError("PGM header not terminated by whitespace");
  const std::size_t data_begin = sep + 1;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - data_begin < count) throw ParseError("PGM raster truncated");

  std::vector<std::uint8_t> mask(count);
  for (std::size_t k = 0; k < count; ++k) {
    // value * 255 / maxval >= threshold, kept in integers.
    const long value = bytes[data_begin + k];
    mask[k] = value * 255 >= static_cast<long>(free_threshold) * maxval ? 1 : 0;
  }
  return OccupancyGrid(static_cast<int>(width), static_cast<int>(height), std::move(mask));
}

OccupancyGrid load_pgm_file(const std::filesystem::path& path, int free_threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open map file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_pgm(bytes, free_threshold);
}

std::vector<std::uint8_t> encode_pgm(const OccupancyGrid& grid) {
  const std::string header = "P5\n" + std::to_string(grid.width()) + " " +
                             std::to_string(grid.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + grid.cell_count());
  for (auto c : grid.cells()) out.push_back(c ? 255 : 0);
  return out;
}

OccupancyGrid inflate(const OccupancyGrid& grid, int radius) {
  if (radius < 0) throw InvalidParameter("inflation radius must be non-negative");
  if (radius == 0) return grid;
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::uint8_t> mask(grid.cells().begin(), grid.cells().end());
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (grid.cell_free(i, j)) continue;
      for (int dj = -radius; dj <= radius; ++dj) {
        for (int di = -radius; di <= radius; ++di) {
          if (grid.in_bounds(i + di, j + dj))
            mask[static_cast<std::size_t>(j + dj) * w + (i + di)] = 0;
        }
      }
    }
  }
  return OccupancyGrid(w, h, std::move(mask));
}

bool is_free(const OccupancyGrid& grid, Point p) {
  if (!is_finite(p)) return false;
  const double fx = std::floor(p.x);
  const double fy = std::floor(p.y);
  if (fx < 0.0 || fy < 0.0 || fx >= grid.width() || fy >= grid.height()) return false;
  return grid.cell_free(static_cast<int>(fx), static_cast<int>(fy));
}

namespace {

// Slack applied to clipped interval ends so rounding never drops a cell that
// the exact segment touches.
constexpr double kTouchSlack = 1e-9;

// Range of integer k with [k, k+1] intersecting [lo, hi]. Returns false when
// the range leaves [0, limit).
bool touched_range(double lo, double hi, int limit, int& first, int& last) {
  const double f = std::ceil(lo - kTouchSlack) - 1.0;
  const double l = std::floor(hi + kTouchSlack);
  if (f < 0.0 || l >= limit) return false;
  first = static_cast<int>(f);
  last = static_cast<int>(l);
  return true;
}

}  // namespace

bool obstacle_free(const OccupancyGrid& grid, Point a, Point b) {
  if (!is_finite(a) || !is_finite(b)) return false;
  // Canonical endpoint order keeps the arithmetic, and so the answer, symmetric.
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);

  int col_first = 0;
  int col_last = 0;
  if (!touched_range(a.x, b.x, grid.width(), col_first, col_last)) return false;

  const double dx = b.x - a.x;
  const double slope = dx > 0.0 ? (b.y - a.y) / dx : 0.0;
  for (int i = col_first; i <= col_last; ++i) {
    double ylo;
    double yhi;
    if (dx > 0.0) {
      const double xl = std::max(a.x, static_cast<double>(i));
      const double xr = std::min(b.x, static_cast<double>(i + 1));
      const double y_at_l = a.y + (xl - a.x) * slope;
      const double y_at_r = a.y + (xr - a.x) * slope;
      ylo = std::min(y_at_l, y_at_r);
      yhi = std::max(y_at_l, y_at_r);
    } else {
      ylo = std::min(a.y, b.y);
      yhi = std::max(a.y, b.y);
    }
    int row_first = 0;
    int row_last = 0;
    if (!touched_range(ylo, yhi, grid.height(), row_first, row_last)) return false;
    for (int j = row_first; j <= row_last; ++j) {
      if (!grid.cell_free(i, j)) return false;
    }
  }
  return true;
}

bool path_obstacle_free(const OccupancyGrid& grid, std::span<const Point> path) {
  if (path.size() == 1) return obstacle_free(grid, path[0], path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!obstacle_free(grid, path[i - 1], path[i])) return false;
  }
  return true;
}

}  // namespace esirrt
