#include "esirrt/skeleton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "esirrt/error.hpp"

namespace esirrt {

std::size_t SkeletonGrid::count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

OccupancyGrid SkeletonGrid::as_grid() const { return OccupancyGrid(width, height, cells); }

namespace {

// Neighbours in Zhang-Suen order P2..P9: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kDi = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDj = {-1, -1, 0, 1, 1, 1, 0, -1};

struct Raster {
  int w;
  int h;
  std::vector<std::uint8_t>& v;

  std::uint8_t get(int i, int j) const {
    if (i < 0 || j < 0 || i >= w || j >= h) return 0;
    return v[static_cast<std::size_t>(j) * w + i];
  }

  std::array<std::uint8_t, 8> ring(int i, int j) const {
    std::array<std::uint8_t, 8> p{};
    for (int k = 0; k < 8; ++k) p[k] = get(i + kDi[k], j + kDj[k]);
    return p;
  }
};

int neighbour_count(const std::array<std::uint8_t, 8>& p) {
  return std::accumulate(p.begin(), p.end(), 0);
}

int transitions(const std::array<std::uint8_t, 8>& p) {
  int a = 0;
  for (int k = 0; k < 8; ++k) a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
  return a;
}

// Yokoi connectivity number for 8-connectivity; a pixel is simple iff it is 1.
bool is_simple(const std::array<std::uint8_t, 8>& p) {
  // Yokoi order x1..x8 = E, NE, N, NW, W, SW, S, SE.
  const std::array<int, 8> x = {p[2], p[1], p[0], p[7], p[6], p[5], p[4], p[3]};
  int n = 0;
  for (int k = 0; k < 8; k += 2) {
    const int a = 1 - x[k];
    const int b = 1 - x[(k + 1) % 8];
    const int c = 1 - x[(k + 2) % 8];
    n += a - a * b * c;
  }
  return n == 1;
}

bool zhang_suen_mark(const std::array<std::uint8_t, 8>& p, bool first_pass) {
  const int b = neighbour_count(p);
  if (b < 2 || b > 6) return false;
  if (transitions(p) != 1) return false;
  const int n = p[0], e = p[2], s = p[4], w = p[6];
  if (first_pass) return n * e * s == 0 && e * s * w == 0;
  return n * e * w == 0 && n * s * w == 0;
}

int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

std::vector<double> gaussian_kernel(int size) {
  const double sigma = 0.3 * ((size - 1) * 0.5 - 1.0) + 0.8;
  std::vector<double> k(size);
  const int half = size / 2;
  double sum = 0.0;
  for (int t = 0; t < size; ++t) {
    const double d = t - half;
    k[t] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[t];
  }
  for (auto& v : k) v /= sum;
  return k;
}

std::vector<double> separable_blur(const std::vector<double>& src, int w, int h,
                                   const std::vector<double>& kernel) {
  const int half = static_cast<int>(kernel.size()) / 2;
  std::vector<double> tmp(src.size(), 0.0);
  std::vector<double> out(src.size(), 0.0);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int t = -half; t <= half; ++t)
        acc += kernel[t + half] * src[static_cast<std::size_t>(j) * w + reflect101(i + t, w)];
      tmp[static_cast<std::size_t>(j) * w + i] = acc;
    }
  }
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int t = -half; t <= half; ++t)
        acc += kernel[t + half] * tmp[static_cast<std::size_t>(reflect101(j + t, h)) * w + i];
      out[static_cast<std::size_t>(j) * w + i] = acc;
    }
  }
  return out;
}

Point pixel_centre(std::size_t index, int width) {
  return {static_cast<double>(index % width) + 0.5, static_cast<double>(index / width) + 0.5};
}

}  // namespace

SkeletonGrid thin(const OccupancyGrid& grid) {
  if (grid.free_count() == 0) throw EmptyFreeSpace("grid has no free cells to thin");
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::uint8_t> img(grid.cells().begin(), grid.cells().end());
  Raster r{w, h, img};

  std::vector<std::size_t> marked;
  bool changed = true;
  while (changed) {
    changed = false;
    for (bool first_pass : {true, false}) {
      marked.clear();
      for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
          if (r.get(i, j) && zhang_suen_mark(r.ring(i, j), first_pass))
            marked.push_back(static_cast<std::size_t>(j) * w + i);
        }
      }
      for (auto idx : marked) {
        const int i = static_cast<int>(idx % w);
        const int j = static_cast<int>(idx / w);
        const auto p = r.ring(i, j);
        if (neighbour_count(p) >= 2 && is_simple(p)) {
          img[idx] = 0;
          changed = true;
        }
      }
    }
  }
  return SkeletonGrid{w, h, std::move(img)};
}

std::vector<double> harris_response(const SkeletonGrid& skel, const HarrisParams& params) {
  if (params.block_size < 1 || params.block_size % 2 == 0)
    throw InvalidParameter("Harris block size must be a positive odd number");
  const int w = skel.width;
  const int h = skel.height;
  const auto n = static_cast<std::size_t>(w) * h;
  auto px = [&](int i, int j) -> double {
    return skel.cells[static_cast<std::size_t>(reflect101(j, h)) * w + reflect101(i, w)];
  };

  std::vector<double> ixx(n), iyy(n), ixy(n);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double gx = (px(i + 1, j - 1) + 2.0 * px(i + 1, j) + px(i + 1, j + 1)) -
                        (px(i - 1, j - 1) + 2.0 * px(i - 1, j) + px(i - 1, j + 1));
      const double gy = (px(i - 1, j + 1) + 2.0 * px(i, j + 1) + px(i + 1, j + 1)) -
                        (px(i - 1, j - 1) + 2.0 * px(i, j - 1) + px(i + 1, j - 1));
      const auto k = static_cast<std::size_t>(j) * w + i;
      ixx[k] = gx * gx;
      iyy[k] = gy * gy;
      ixy[k] = gx * gy;
    }
  }
  const auto kernel = gaussian_kernel(params.block_size);
  const auto sxx = separable_blur(ixx, w, h, kernel);
  const auto syy = separable_blur(iyy, w, h, kernel);
  const auto sxy = separable_blur(ixy, w, h, kernel);

  std::vector<double> response(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double det = sxx[k] * syy[k] - sxy[k] * sxy[k];
    const double tr = sxx[k] + syy[k];
    response[k] = det - params.k * tr * tr;
  }
  return response;
}

CornerSet harris_corners(const SkeletonGrid& skel, const HarrisParams& params) {
  if (params.nms_radius < 0.0) throw InvalidParameter("NMS radius must be non-negative");
  const auto response = harris_response(skel, params);
  const double max_r = *std::max_element(response.begin(), response.end());
  CornerSet out;
  if (!(max_r > 0.0)) return out;
  const double cut = params.threshold * max_r;

  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < response.size(); ++k) {
    if (skel.cells[k] && response[k] >= cut && response[k] > 0.0) candidates.push_back(k);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return response[a] > response[b]; });

  const double r2 = params.nms_radius * params.nms_radius;
  for (auto k : candidates) {
    const Point c = pixel_centre(k, skel.width);
    const bool clear = std::none_of(out.corners.begin(), out.corners.end(),
                                    [&](Point q) { return squared_distance(c, q) < r2; });
    if (clear) out.corners.push_back(c);
  }
  return out;
}

std::vector<Point> skeleton_endpoints(const SkeletonGrid& skel) {
  std::vector<Point> out;
  for (int j = 0; j < skel.height; ++j) {
    for (int i = 0; i < skel.width; ++i) {
      if (!skel.at(i, j)) continue;
      int n = 0;
      for (int k = 0; k < 8; ++k) n += skel.at(i + kDi[k], j + kDj[k]) ? 1 : 0;
      if (n == 1) out.push_back({i + 0.5, j + 0.5});
    }
  }
  return out;
}

CornerSet structural_nodes(const SkeletonGrid& skel, const HarrisParams& params) {
  CornerSet nodes = harris_corners(skel, params);
  const double r2 = params.nms_radius * params.nms_radius;
  for (Point e : skeleton_endpoints(skel)) {
    const bool clear = std::none_of(nodes.corners.begin(), nodes.corners.end(),
                                    [&](Point q) { return squared_distance(e, q) < r2; });
    if (clear) nodes.corners.push_back(e);
  }
  return nodes;
}

}  // namespace esirrt
