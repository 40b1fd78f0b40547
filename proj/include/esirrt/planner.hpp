#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "esirrt/geometry.hpp"
#include "esirrt/gridmap.hpp"
#include "esirrt/initgraph.hpp"
#include "esirrt/plan_tree.hpp"
#include "esirrt/skeleton.hpp"
#include "esirrt/smoothing.hpp"

namespace esirrt {

enum class PlannerKind { Irrt, Sirrt, Esirrt };

std::string_view planner_name(PlannerKind kind);
std::optional<PlannerKind> parse_planner(std::string_view name);

/// Seedable stream over std::mt19937_64. Only the engine's raw 64-bit output
/// is consumed (the standard distributions are implementation-defined), so
/// sequences are identical across platforms. Trial i of a run uses base + i.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n); n > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t floor = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= floor) return r % n;
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Ellipse of points whose focal-distance sum is at most c_best.
struct InformedRegion {
  Point focus_a;
  Point focus_b;
  double c_best = 0.0;
  double c_min = 0.0;

  static InformedRegion between(Point a, Point b, double c_best) {
    return {a, b, c_best, distance(a, b)};
  }
  double semi_major() const { return c_best / 2.0; }
  double semi_minor() const;
  double rotation() const;  // radians, focal axis angle
};

struct PlannerParams {
  double eta = 10.0;            // steer step, pixels
  double gamma = 0.0;           // shrinking-ball constant; <= 0 derives it from free area
  double goal_bias = 0.05;      // IRRT* only, before the first solution
  double goal_radius = 0.0;     // <= 0 means eta
  double rewire_radius = 0.0;   // bidirectional rewiring; <= 0 means 2 * subsample_d
  double subsample_d = 10.0;
  int spline_n = 200;
  HarrisParams harris;
  std::size_t max_initial_iters = 200000;  // IRRT* cap on the search for a first solution
};

/// Resolved numeric parameters after applying the derived defaults.
struct ResolvedParams {
  double eta;
  double gamma;
  double goal_bias;
  double goal_radius;
  double rewire_radius;
};
ResolvedParams resolve(const PlannerParams& params, const OccupancyGrid& grid);

/// Chains the smoothed path onto the tree starting from the root. Points that
/// coincide with an existing node reuse it, re-parenting it onto the previous
/// path node only when that is strictly cheaper. Returns the node of each
/// path point. Throws InvalidPath if the path does not start at the root.
std::vector<NodeId> insert_smoothed_path(PlanTree& tree, std::span<const Point> smooth);

/// Forward and reverse rewiring around every path node, in path order.
/// Forward: a neighbour q adopts p as parent when that lowers cost(q).
/// Reverse: p adopts a neighbour q when that lowers cost(p); cost(p) is
/// re-read after each accepted change. Neighbour sets are fixed per p and
/// re-parenting onto a descendant is skipped.
void bidirectional_rewiring(PlanTree& tree, std::span<const NodeId> path_nodes, double radius,
                            const OccupancyGrid& grid);

/// Uniform sample inside the informed ellipse. Throws InvalidRegion when
/// c_best < c_min.
Point informed_sample(const InformedRegion& region, RngStream& rng);

Point steer(Point from, Point to, double eta);

/// min(gamma sqrt(log n / n), eta), and eta for n <= 1.
double shrinking_radius(std::size_t n, double gamma, double eta);

std::vector<NodeId> near(const PlanTree& tree, Point p, double gamma, double eta);

/// Cheapest collision-free parent among `near_set` and `nearest`.
std::optional<NodeId> choose_parent(const PlanTree& tree, Point p_new,
                                    std::span<const NodeId> near_set, NodeId nearest,
                                    const OccupancyGrid& grid);

NodeId insert_node(PlanTree& tree, NodeId parent, Point p_new);

/// Re-parents near nodes through `new_node` when strictly cheaper and free.
void rewire(PlanTree& tree, NodeId new_node, std::span<const NodeId> near_set,
            const OccupancyGrid& grid);

struct PlanResult {
  PlannerKind kind;
  PlanTree tree;
  NodeId goal_node = kNoNode;
  Path path;                        // final root-to-goal path (empty if unsolved)
  std::vector<double> cost_trace;   // best goal cost after each iteration
  std::size_t initial_iteration = 0;
  double initial_cost = 0.0;

  // Skeleton-initialized planners only.
  SkeletonGrid skeleton;
  CornerSet nodes;
  Path init_path;      // MST path
  Path spline_path;    // E-SIRRT*: spline before correction
  Path smooth_path;    // E-SIRRT*: corrected spline
  Path refined_path;   // tree path to the goal before informed iterations

  bool solved() const { return goal_node != kNoNode; }
  double final_cost() const;
};

/// Runs one planner. `iters` counts informed iterations after the initial
/// solution; IRRT* first searches for a solution for up to
/// `params.max_initial_iters` iterations, which also appear in the trace.
PlanResult plan(PlannerKind kind, const OccupancyGrid& grid, Point start, Point goal,
                std::size_t iters, std::uint64_t seed, const PlannerParams& params = {});

}  // namespace esirrt
