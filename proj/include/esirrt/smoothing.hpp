#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esirrt/geometry.hpp"
#include "esirrt/gridmap.hpp"

namespace esirrt {

/// Natural cubic spline over uniform knots on one axis. Segment i covers
/// [knots[i], knots[i+1]] with s_i(u) = a + b t + c t^2 + d t^3, t = u - knots[i].
struct SplineCoeffs {
  std::vector<double> knots;
  std::vector<double> a, b, c, d;
  double h = 0.0;

  std::size_t segments() const { return a.size(); }
  double value(std::size_t i, double t) const { return a[i] + t * (b[i] + t * (c[i] + t * d[i])); }
  double first_derivative(std::size_t i, double t) const {
    return b[i] + t * (2.0 * c[i] + 3.0 * t * d[i]);
  }
  double second_derivative(std::size_t i, double t) const { return 2.0 * c[i] + 6.0 * d[i] * t; }
};

struct SmoothingParams {
  double subsample_d = 10.0;
  int spline_n = 200;
};

/// Points at arc lengths 0, d, 2d, ... along the polyline, then the final
/// point. Throws InvalidParameter for d <= 0 or fewer than two points.
Path subsample_path(std::span<const Point> path, double d);

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored. Returns the solution.
std::vector<double> thomas_solve(std::span<const double> lower, std::span<const double> diag,
                                 std::span<const double> upper, std::span<const double> rhs);

/// Natural cubic spline interpolating `values` at uniform `knots`.
/// Solves h (M[i-1] + 4 M[i] + M[i+1]) = 3 (D[i] - D[i-1]) for the interior
/// M with M[0] = M[m] = 0, D[i] = (z[i+1] - z[i]) / h, then sets c = M.
SplineCoeffs cubic_spline_fit(std::span<const double> values, std::span<const double> knots);

/// N + 1 samples at u = k / N of the planar spline (x(u), y(u)).
Path evaluate_spline(const SplineCoeffs& x, const SplineCoeffs& y, int n_intervals);

/// Walks the spline path keeping every point reachable in a straight free
/// line from the last kept one; otherwise substitutes the fallback point
/// that is visible from the last kept point and closest to the rejected one.
Path collision_aware_correction(std::span<const Point> spline_path,
                                std::span<const Point> fallback_path, const OccupancyGrid& grid);

struct SmoothingStages {
  Path control;  // subsampled control points
  Path spline;   // dense spline samples before correction
  Path smooth;   // corrected, segment-wise obstacle-free
};

SmoothingStages hybrid_path_smoothing_stages(std::span<const Point> init_path, double d,
                                             int n_intervals, const OccupancyGrid& grid);

Path hybrid_path_smoothing(std::span<const Point> init_path, double d, int n_intervals,
                           const OccupancyGrid& grid);

}  // namespace esirrt
