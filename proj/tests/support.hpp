// Shared fixtures and independent reference implementations for the tests.
// Nothing in here calls into the code path it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "esirrt/geometry.hpp"
#include "esirrt/gridmap.hpp"
#include "esirrt/initgraph.hpp"
#include "esirrt/plan_tree.hpp"

namespace testing {

using esirrt::OccupancyGrid;
using esirrt::Point;

inline std::filesystem::path maps_dir() { return ESIRRT_MAPS_DIR; }

struct MapPreset {
  const char* file;
  Point start;
  Point goal;
};

inline constexpr MapPreset kMultiRoom{"multi_room.pgm", {20.5, 20.5}, {220.5, 140.5}};
inline constexpr MapPreset kNarrowPassage{"narrow_passage.pgm", {20.5, 20.5}, {140.5, 80.5}};
inline constexpr MapPreset kLCorridor{"l_corridor.pgm", {20.5, 15.5}, {85.5, 80.5}};
inline constexpr MapPreset kOpen50{"open50.pgm", {5.5, 5.5}, {44.5, 40.5}};

inline OccupancyGrid load_map(const MapPreset& m) {
  return esirrt::load_pgm_file(maps_dir() / m.file);
}

/// Grid from rows of text: '.' free, '#' occupied.
inline OccupancyGrid grid_from_ascii(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  std::vector<std::uint8_t> mask;
  for (const auto& r : rows)
    for (char c : r) mask.push_back(c == '.' ? 1 : 0);
  return OccupancyGrid(w, h, mask);
}

inline OccupancyGrid open_grid(int w, int h) {
  return OccupancyGrid(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 1));
}

inline OccupancyGrid random_grid(std::mt19937_64& rng, int w, int h, double occupied_fraction) {
  std::bernoulli_distribution occ(occupied_fraction);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h);
  for (auto& c : mask) c = occ(rng) ? 0 : 1;
  return OccupancyGrid(w, h, mask);
}

/// Random map of rectangular obstacles on an open field.
inline OccupancyGrid random_block_map(std::mt19937_64& rng, int w, int h, int blocks) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 1);
  std::uniform_int_distribution<int> bx(0, w - 1), by(0, h - 1), bs(2, std::max(3, w / 5));
  for (int k = 0; k < blocks; ++k) {
    const int x0 = bx(rng), y0 = by(rng), sx = bs(rng), sy = bs(rng);
    for (int y = y0; y < std::min(h, y0 + sy); ++y)
      for (int x = x0; x < std::min(w, x0 + sx); ++x) mask[static_cast<std::size_t>(y) * w + x] = 0;
  }
  return OccupancyGrid(w, h, mask);
}

// ---------------------------------------------------------------------------
// Collision oracle: test every cell's closed square (grown by 1e-9, the same
// conservative slack the contract allows) against the segment with
// Liang-Barsky clipping.

inline bool segment_touches_box(Point a, Point b, double x0, double y0, double x1, double y1) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
    } else {
      const double r = q[k] / p[k];
      if (p[k] < 0.0) t0 = std::max(t0, r);
      else t1 = std::min(t1, r);
    }
  }
  return t0 <= t1;
}

inline std::vector<std::pair<int, int>> oracle_touched_cells(Point a, Point b, int pad_w, int pad_h) {
  constexpr double kSlack = 1e-9;
  std::vector<std::pair<int, int>> cells;
  for (int j = -1; j <= pad_h; ++j)
    for (int i = -1; i <= pad_w; ++i)
      if (segment_touches_box(a, b, i - kSlack, j - kSlack, i + 1 + kSlack, j + 1 + kSlack))
        cells.emplace_back(i, j);
  return cells;
}

inline bool oracle_obstacle_free(const OccupancyGrid& g, Point a, Point b) {
  for (auto [i, j] : oracle_touched_cells(a, b, g.width(), g.height()))
    if (!g.cell_free(i, j)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// 8-connected component count over a row-major mask.

inline int count_components(int w, int h, const std::vector<std::uint8_t>& mask) {
  std::vector<int> label(mask.size(), -1);
  int n = 0;
  for (std::size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s] || label[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = n;
    while (!q.empty()) {
      const auto k = q.front();
      q.pop();
      const int x = static_cast<int>(k % w), y = static_cast<int>(k / w);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const auto nk = static_cast<std::size_t>(ny) * w + nx;
          if (mask[nk] && label[nk] < 0) {
            label[nk] = n;
            q.push(nk);
          }
        }
    }
    ++n;
  }
  return n;
}

inline int count_components(const OccupancyGrid& g) {
  return count_components(g.width(), g.height(),
                          std::vector<std::uint8_t>(g.cells().begin(), g.cells().end()));
}

// ---------------------------------------------------------------------------
// Kruskal MST weight with union-find.

inline double kruskal_weight(std::size_t n, std::vector<esirrt::GraphEdge> edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::sort(edges.begin(), edges.end(), [](auto& a, auto& b) { return a.weight < b.weight; });
  double total = 0.0;
  for (const auto& e : edges) {
    const auto ru = find(e.u), rv = find(e.v);
    if (ru != rv) {
      parent[ru] = rv;
      total += e.weight;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Dense Gaussian elimination with partial pivoting.

inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Natural cubic spline coefficients found by solving the full 4m x 4m
/// interpolation + C1 + C2 + natural-boundary system densely. Returns
/// {a0,b0,c0,d0, a1,...} with s_i(u) = a + b t + c t^2 + d t^3.
inline std::vector<double> dense_natural_spline(const std::vector<double>& z, double h) {
  const std::size_t m = z.size() - 1;
  const std::size_t n = 4 * m;
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < m; ++i) {
    A[row][4 * i] = 1.0;
    rhs[row++] = z[i];
    A[row][4 * i] = 1.0;
    A[row][4 * i + 1] = h;
    A[row][4 * i + 2] = h * h;
    A[row][4 * i + 3] = h * h * h;
    rhs[row++] = z[i + 1];
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    // s_i'(h) = s_{i+1}'(0)
    A[row][4 * i + 1] = 1.0;
    A[row][4 * i + 2] = 2.0 * h;
    A[row][4 * i + 3] = 3.0 * h * h;
    A[row++][4 * (i + 1) + 1] = -1.0;
    // s_i''(h) = s_{i+1}''(0)
    A[row][4 * i + 2] = 2.0;
    A[row][4 * i + 3] = 6.0 * h;
    A[row++][4 * (i + 1) + 2] = -2.0;
  }
  A[row++][2] = 2.0;
  A[row][4 * (m - 1) + 2] = 2.0;
  A[row++][4 * (m - 1) + 3] = 6.0 * h;
  return dense_solve(A, rhs);
}

// ---------------------------------------------------------------------------
// Tree oracles.

/// Cost of every node recomputed from scratch by walking its parent chain.
inline std::vector<double> recomputed_costs(const esirrt::PlanTree& tree) {
  std::vector<double> out(tree.size(), 0.0);
  for (esirrt::NodeId v = 0; v < tree.size(); ++v) {
    double c = 0.0;
    std::size_t steps = 0;
    for (auto w = v; tree.parent(w) != esirrt::kNoNode && steps <= tree.size(); w = tree.parent(w), ++steps)
      c += esirrt::distance(tree.position(w), tree.position(tree.parent(w)));
    out[v] = c;
  }
  return out;
}

inline std::vector<double> cost_vector(const esirrt::PlanTree& tree) {
  std::vector<double> out(tree.size());
  for (esirrt::NodeId v = 0; v < tree.size(); ++v) out[v] = tree.cost(v);
  return out;
}

/// Minimum distance from p to a polyline, and the arc length of the foot.
inline std::pair<double, double> project_onto_polyline(const std::vector<Point>& poly, Point p) {
  double best = std::numeric_limits<double>::infinity();
  double best_arc = 0.0;
  double arc = 0.0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const Point a = poly[i], b = poly[i + 1];
    const double len2 = esirrt::squared_distance(a, b);
    double t = len2 > 0.0 ? ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point f{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    const double d = esirrt::distance(p, f);
    if (d < best) {
      best = d;
      best_arc = arc + t * std::sqrt(len2);
    }
    arc += std::sqrt(len2);
  }
  return {best, best_arc};
}

/// A collision-free random walk on the grid starting at a free cell centre.
inline esirrt::Path random_free_walk(std::mt19937_64& rng, const esirrt::OccupancyGrid& g, int steps) {
  std::uniform_int_distribution<int> ci(0, g.width() - 1), cj(0, g.height() - 1);
  Point p;
  do p = {ci(rng) + 0.5, cj(rng) + 0.5};
  while (!esirrt::is_free(g, p));
  esirrt::Path walk{p};
  std::uniform_real_distribution<double> step(-12.0, 12.0);
  for (int tries = 0; tries < 2000 && static_cast<int>(walk.size()) < steps; ++tries) {
    const Point q{walk.back().x + step(rng), walk.back().y + step(rng)};
    if (esirrt::distance(q, walk.back()) > 0.5 && oracle_obstacle_free(g, walk.back(), q)) walk.push_back(q);
  }
  return walk;
}


inline esirrt::NodeId linear_nearest(const esirrt::PlanTree& t, Point p) {
  esirrt::NodeId best = 0;
  for (esirrt::NodeId v = 1; v < t.size(); ++v)
    if (esirrt::squared_distance(t.position(v), p) < esirrt::squared_distance(t.position(best), p)) best = v;
  return best;
}

inline std::vector<esirrt::NodeId> linear_within(const esirrt::PlanTree& t, Point p, double r) {
  std::vector<esirrt::NodeId> out;
  for (esirrt::NodeId v = 0; v < t.size(); ++v)
    if (esirrt::squared_distance(t.position(v), p) <= r * r) out.push_back(v);
  return out;
}


/// Random tree over free space with deliberately poor parents: each new
/// point hangs off a random visible node rather than the cheapest one.
inline esirrt::PlanTree random_tree(std::mt19937_64& rng, const esirrt::OccupancyGrid& g, std::size_t nodes) {
  std::uniform_real_distribution<double> ux(0.0, g.width()), uy(0.0, g.height());
  Point root;
  do root = {ux(rng), uy(rng)};
  while (!esirrt::is_free(g, root));
  esirrt::PlanTree t(root, g.width(), g.height(), 10.0);
  for (int tries = 0; tries < 20000 && t.size() < nodes; ++tries) {
    const Point p{ux(rng), uy(rng)};
    if (!esirrt::is_free(g, p)) continue;
    auto cands = t.within(p, 15.0);
    std::shuffle(cands.begin(), cands.end(), rng);
    for (esirrt::NodeId c : cands)
      if (esirrt::obstacle_free(g, t.position(c), p)) {
        t.add_node(p, c);
        break;
      }
  }
  return t;
}


inline esirrt::NodeGraph abstract_graph(std::size_t n, std::vector<esirrt::GraphEdge> edges) {
  esirrt::NodeGraph g;
  g.vertices.resize(n);
  g.edges = std::move(edges);
  return g;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline esirrt::NodeGraph random_connected_graph(std::mt19937_64& rng, bool integer_weights) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
  std::uniform_real_distribution<double> wr(0.1, 100.0);
  std::uniform_int_distribution<int> wi(1, 30);
  auto weight = [&] { return integer_weights ? double(wi(rng)) : wr(rng); };
  std::set<std::pair<esirrt::VertexId, esirrt::VertexId>> seen;
  std::vector<esirrt::GraphEdge> edges;
  auto add = [&](esirrt::VertexId a, esirrt::VertexId b) {
    if (a == b) return;
    const auto key = std::minmax(a, b);
    if (!seen.insert(key).second) return;
    edges.push_back({key.first, key.second, weight()});
  };
  for (esirrt::VertexId v = 1; v < n; ++v) add(v, std::uniform_int_distribution<esirrt::VertexId>(0, v - 1)(rng));
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, n * 2)(rng);
  std::uniform_int_distribution<esirrt::VertexId> any(0, n - 1);
  for (std::size_t k = 0; k < extra; ++k) add(any(rng), any(rng));
  return abstract_graph(n, edges);
}

}  // namespace testing
