#include "esirrt/smoothing.hpp"

#include <cmath>
#include <limits>

#include "esirrt/error.hpp"

namespace esirrt {

namespace {

constexpr double kSameTol = 1e-9;

}  // namespace

Path subsample_path(std::span<const Point> path, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw InvalidParameter("subsample distance must be positive");
  if (path.size() < 2) throw InvalidParameter("subsampling needs at least two points");

  const double total = path_length(path);
  Path out{path.front()};
  double seg_start = 0.0;  // arc length at path[seg]
  std::size_t seg = 0;
  for (int k = 1;; ++k) {
    const double target = k * d;
    if (target >= total - kSameTol) break;
    while (seg + 1 < path.size()) {
      const double len = distance(path[seg], path[seg + 1]);
      if (target <= seg_start + len) break;
      seg_start += len;
      ++seg;
    }
    const double len = distance(path[seg], path[seg + 1]);
    const double t = len > 0.0 ? (target - seg_start) / len : 0.0;
    out.push_back(path[seg] + t * (path[seg + 1] - path[seg]));
  }
  out.push_back(path.back());
  return out;
}

std::vector<double> thomas_solve(std::span<const double> lower, std::span<const double> diag,
                                 std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw InvalidParameter("tridiagonal system bands must have equal length");
  if (n == 0) return {};

  std::vector<double> c_prime(n, 0.0);
  std::vector<double> d_prime(n, 0.0);
  c_prime[0] = upper[0] / diag[0];
  d_prime[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag[i] - lower[i] * c_prime[i - 1];
    c_prime[i] = i + 1 < n ? upper[i] / denom : 0.0;
    d_prime[i] = (rhs[i] - lower[i] * d_prime[i - 1]) / denom;
  }
  std::vector<double> x(n);
  x[n - 1] = d_prime[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d_prime[i] - c_prime[i] * x[i + 1];
  return x;
}

SplineCoeffs cubic_spline_fit(std::span<const double> values, std::span<const double> knots) {
  if (values.size() < 2) throw InvalidParameter("spline fit needs at least two data values");
  if (knots.size() != values.size()) throw InvalidParameter("knot and value counts differ");
  const std::size_t m = values.size() - 1;
  const double h = knots[1] - knots[0];
  if (!(h > 0.0)) throw InvalidParameter("knots must be strictly increasing");
  for (std::size_t i = 1; i < m; ++i) {
    if (std::abs((knots[i + 1] - knots[i]) - h) > 1e-9 * std::max(1.0, h))
      throw InvalidParameter("spline knots must be uniformly spaced");
  }

  std::vector<double> slope(m);
  for (std::size_t i = 0; i < m; ++i) slope[i] = (values[i + 1] - values[i]) / h;

  std::vector<double> second(m + 1, 0.0);
  if (m >= 2) {
    const std::size_t n = m - 1;
    std::vector<double> lower(n, h), diag(n, 4.0 * h), upper(n, h), rhs(n);
    for (std::size_t i = 1; i < m; ++i) rhs[i - 1] = 3.0 * (slope[i] - slope[i - 1]);
    const auto interior = thomas_solve(lower, diag, upper, rhs);
    std::copy(interior.begin(), interior.end(), second.begin() + 1);
  }

  SplineCoeffs s;
  s.knots.assign(knots.begin(), knots.end());
  s.h = h;
  s.a.resize(m);
  s.b.resize(m);
  s.c.resize(m);
  s.d.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    s.a[i] = values[i];
    s.b[i] = slope[i] - (h / 3.0) * (2.0 * second[i] + second[i + 1]);
    s.c[i] = second[i];
    s.d[i] = (second[i + 1] - second[i]) / (3.0 * h);
  }
  return s;
}

Path evaluate_spline(const SplineCoeffs& x, const SplineCoeffs& y, int n_intervals) {
  if (n_intervals < 1) throw InvalidParameter("spline sample count must be at least 1");
  const auto m = static_cast<long long>(x.segments());
  if (m < 1 || static_cast<long long>(y.segments()) != m)
    throw InvalidParameter("axis splines must share a non-empty segmentation");
  const long long n = n_intervals;
  const double span = x.knots.back() - x.knots.front();

  Path out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k) {
    // u_k = k / N lies in segment floor(k m / N); the offset stays exact at knots.
    const long long i = std::min(k * m / n, m - 1);
    const double delta = static_cast<double>(k * m - i * n) / static_cast<double>(n * m) * span;
    const auto seg = static_cast<std::size_t>(i);
    out.push_back({x.value(seg, delta), y.value(seg, delta)});
  }
  return out;
}

Path collision_aware_correction(std::span<const Point> spline_path,
                                std::span<const Point> fallback_path, const OccupancyGrid& grid) {
  Path out;
  if (spline_path.empty()) return out;
  out.push_back(spline_path.front());
  Point prev = spline_path.front();

  for (std::size_t i = 1; i < spline_path.size(); ++i) {
    const Point curr = spline_path[i];
    if (obstacle_free(grid, prev, curr)) {
      if (!nearly_equal(curr, prev, kSameTol)) {
        out.push_back(curr);
        prev = curr;
      }
      continue;
    }
    const Point* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const Point& f : fallback_path) {
      if (!obstacle_free(grid, prev, f)) continue;
      const double dist = distance(f, curr);
      if (dist < best_dist) {
        best = &f;
        best_dist = dist;
      }
    }
    if (best != nullptr && !nearly_equal(*best, prev, kSameTol)) {
      out.push_back(*best);
      prev = *best;
    }
  }
  return out;
}

SmoothingStages hybrid_path_smoothing_stages(std::span<const Point> init_path, double d,
                                             int n_intervals, const OccupancyGrid& grid) {
  SmoothingStages stages;
  stages.control = subsample_path(init_path, d);
  const std::size_t m = stages.control.size() - 1;

  std::vector<double> knots(m + 1), xs(m + 1), ys(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    knots[i] = static_cast<double>(i) / static_cast<double>(m);
    xs[i] = stages.control[i].x;
    ys[i] = stages.control[i].y;
  }
  const auto sx = cubic_spline_fit(xs, knots);
  const auto sy = cubic_spline_fit(ys, knots);
  stages.spline = evaluate_spline(sx, sy, n_intervals);
  stages.smooth = collision_aware_correction(stages.spline, init_path, grid);
  return stages;
}

Path hybrid_path_smoothing(std::span<const Point> init_path, double d, int n_intervals,
                           const OccupancyGrid& grid) {
  return hybrid_path_smoothing_stages(init_path, d, n_intervals, grid).smooth;
}

}  // namespace esirrt
