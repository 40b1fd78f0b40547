#include "esirrt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "esirrt/error.hpp"

namespace esirrt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSameTol = 1e-9;
constexpr int kOutOfMapRetries = 100;

}  // namespace

std::string_view planner_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Irrt:
      return "irrt";
    case PlannerKind::Sirrt:
      return "sirrt";
    case PlannerKind::Esirrt:
      return "esirrt";
  }
  return "unknown";
}

std::optional<PlannerKind> parse_planner(std::string_view name) {
  if (name == "irrt") return PlannerKind::Irrt;
  if (name == "sirrt") return PlannerKind::Sirrt;
  if (name == "esirrt") return PlannerKind::Esirrt;
  return std::nullopt;
}

double InformedRegion::semi_minor() const {
  return std::sqrt(std::max(0.0, c_best * c_best - c_min * c_min)) / 2.0;
}

double InformedRegion::rotation() const {
  return std::atan2(focus_b.y - focus_a.y, focus_b.x - focus_a.x);
}

ResolvedParams resolve(const PlannerParams& params, const OccupancyGrid& grid) {
  if (!(params.eta > 0.0)) throw InvalidParameter("eta must be positive");
  if (params.goal_bias < 0.0 || params.goal_bias > 1.0)
    throw InvalidParameter("goal bias must lie in [0, 1]");
  if (!(params.subsample_d > 0.0)) throw InvalidParameter("subsample distance must be positive");
  if (params.spline_n < 1) throw InvalidParameter("spline sample count must be at least 1");
  ResolvedParams r{};
  r.eta = params.eta;
  r.gamma = params.gamma > 0.0
                ? params.gamma
                : 2.0 * std::sqrt(1.5 * static_cast<double>(grid.free_count()) / std::numbers::pi);
  r.goal_bias = params.goal_bias;
  r.goal_radius = params.goal_radius > 0.0 ? params.goal_radius : params.eta;
  r.rewire_radius = params.rewire_radius > 0.0 ? params.rewire_radius : 2.0 * params.subsample_d;
  return r;
}

std::vector<NodeId> insert_smoothed_path(PlanTree& tree, std::span<const Point> smooth) {
  if (smooth.empty() || !nearly_equal(smooth.front(), tree.position(PlanTree::root()), kSameTol))
    throw InvalidPath("smoothed path must start at the tree root");
  std::vector<NodeId> ids{PlanTree::root()};
  NodeId prev = PlanTree::root();
  for (std::size_t k = 1; k < smooth.size(); ++k) {
    const Point p = smooth[k];
    if (auto existing = tree.find_coincident(p, kSameTol)) {
      const NodeId id = *existing;
      if (id == prev) continue;
      const double via_prev = tree.cost(prev) + distance(tree.position(prev), tree.position(id));
      if (id != PlanTree::root() && via_prev < tree.cost(id) && !tree.is_ancestor(id, prev))
        tree.set_parent(id, prev);
      ids.push_back(id);
      prev = id;
    } else {
      prev = tree.add_node(p, prev);
      ids.push_back(prev);
    }
  }
  return ids;
}

void bidirectional_rewiring(PlanTree& tree, std::span<const NodeId> path_nodes, double radius,
                            const OccupancyGrid& grid) {
  for (NodeId p : path_nodes) {
    std::vector<NodeId> near_set = tree.within(tree.position(p), radius);
    std::erase(near_set, p);

    for (NodeId q : near_set) {
      if (q == PlanTree::root()) continue;
      const double via_p = tree.cost(p) + distance(tree.position(p), tree.position(q));
      if (via_p < tree.cost(q) && !tree.is_ancestor(q, p) &&
          obstacle_free(grid, tree.position(p), tree.position(q)))
        tree.set_parent(q, p);
    }
    if (p == PlanTree::root()) continue;
    for (NodeId q : near_set) {
      const double via_q = tree.cost(q) + distance(tree.position(q), tree.position(p));
      if (via_q < tree.cost(p) && !tree.is_ancestor(p, q) &&
          obstacle_free(grid, tree.position(q), tree.position(p)))
        tree.set_parent(p, q);
    }
  }
}

Point informed_sample(const InformedRegion& region, RngStream& rng) {
  if (!std::isfinite(region.c_best)) throw InvalidRegion("informed region needs a finite cost");
  if (region.c_best < region.c_min) throw InvalidRegion("c_best is below the focal distance");
  const double radius = std::sqrt(rng.uniform01());
  const double theta = 2.0 * std::numbers::pi * rng.uniform01();
  const double ux = radius * std::cos(theta) * region.semi_major();
  const double uy = radius * std::sin(theta) * region.semi_minor();
  const double rot = region.rotation();
  const double c = std::cos(rot);
  const double s = std::sin(rot);
  const Point centre = 0.5 * (region.focus_a + region.focus_b);
  return {centre.x + c * ux - s * uy, centre.y + s * ux + c * uy};
}

Point steer(Point from, Point to, double eta) {
  if (!(eta > 0.0)) throw InvalidParameter("steer step must be positive");
  const double d = distance(from, to);
  if (d <= eta) return to;
  return from + (eta / d) * (to - from);
}

double shrinking_radius(std::size_t n, double gamma, double eta) {
  if (n <= 1) return eta;
  const double nn = static_cast<double>(n);
  return std::min(gamma * std::sqrt(std::log(nn) / nn), eta);
}

std::vector<NodeId> near(const PlanTree& tree, Point p, double gamma, double eta) {
  return tree.within(p, shrinking_radius(tree.size(), gamma, eta));
}

std::optional<NodeId> choose_parent(const PlanTree& tree, Point p_new,
                                    std::span<const NodeId> near_set, NodeId nearest,
                                    const OccupancyGrid& grid) {
  std::vector<NodeId> candidates(near_set.begin(), near_set.end());
  if (std::find(candidates.begin(), candidates.end(), nearest) == candidates.end())
    candidates.insert(std::lower_bound(candidates.begin(), candidates.end(), nearest), nearest);

  std::optional<NodeId> best;
  double best_cost = kInf;
  for (NodeId q : candidates) {
    const double c = tree.cost(q) + distance(tree.position(q), p_new);
    if (c < best_cost && obstacle_free(grid, tree.position(q), p_new)) {
      best = q;
      best_cost = c;
    }
  }
  return best;
}

NodeId insert_node(PlanTree& tree, NodeId parent, Point p_new) { return tree.add_node(p_new, parent); }

void rewire(PlanTree& tree, NodeId new_node, std::span<const NodeId> near_set,
            const OccupancyGrid& grid) {
  const Point p = tree.position(new_node);
  for (NodeId q : near_set) {
    if (q == new_node || q == PlanTree::root() || q == tree.parent(new_node)) continue;
    const double via_new = tree.cost(new_node) + distance(p, tree.position(q));
    if (via_new < tree.cost(q) && !tree.is_ancestor(q, new_node) &&
        obstacle_free(grid, p, tree.position(q)))
      tree.set_parent(q, new_node);
  }
}

double PlanResult::final_cost() const {
  if (!cost_trace.empty()) return cost_trace.back();
  return solved() ? initial_cost : kInf;
}

namespace {

class Search {
 public:
  Search(const OccupancyGrid& grid, Point start, Point goal, const ResolvedParams& params,
         RngStream& rng, PlanTree& tree)
      : grid_(grid), start_(start), goal_(goal), params_(params), rng_(rng), tree_(tree) {
    for (int j = 0; j < grid.height(); ++j) {
      for (int i = 0; i < grid.width(); ++i) {
        if (grid.cell_free(i, j)) free_cells_.push_back(static_cast<std::uint32_t>(j * grid.width() + i));
      }
    }
  }

  NodeId goal_node = kNoNode;

  double best_cost() const { return goal_node == kNoNode ? kInf : tree_.cost(goal_node); }

  // One sample/extend step. Returns true when it produced the first solution.
  bool iterate() {
    const Point sample = draw_sample();
    const NodeId nearest = tree_.nearest(sample);
    const Point p_new = steer(tree_.position(nearest), sample, params_.eta);
    if (!is_free(grid_, p_new)) return false;
    if (tree_.find_coincident(p_new, kSameTol)) return false;

    const auto near_set = near(tree_, p_new, params_.gamma, params_.eta);
    const auto parent = choose_parent(tree_, p_new, near_set, nearest, grid_);
    if (!parent) return false;
    const NodeId id = insert_node(tree_, *parent, p_new);
    rewire(tree_, id, near_set, grid_);

    if (goal_node == kNoNode) return try_connect_goal(id);
    return false;
  }

 private:
  Point draw_sample() {
    if (goal_node != kNoNode) {
      const double c_min = distance(start_, goal_);
      const auto region = InformedRegion::between(start_, goal_, std::max(best_cost(), c_min));
      Point s{};
      for (int attempt = 0; attempt < kOutOfMapRetries; ++attempt) {
        s = informed_sample(region, rng_);
        if (s.x >= 0.0 && s.y >= 0.0 && s.x < grid_.width() && s.y < grid_.height()) break;
      }
      return s;
    }
    if (rng_.uniform01() < params_.goal_bias) return goal_;
    const std::uint32_t cell = free_cells_[rng_.below(free_cells_.size())];
    const int i = static_cast<int>(cell % grid_.width());
    const int j = static_cast<int>(cell / grid_.width());
    const double fx = rng_.uniform01();
    const double fy = rng_.uniform01();
    return {i + fx, j + fy};
  }

  bool try_connect_goal(NodeId id) {
    const Point p = tree_.position(id);
    if (distance(p, goal_) > params_.goal_radius) return false;
    if (nearly_equal(p, goal_, kSameTol)) {
      goal_node = id;
      return true;
    }
    if (!obstacle_free(grid_, p, goal_)) return false;
    const auto candidates = tree_.within(goal_, params_.goal_radius);
    const auto parent = choose_parent(tree_, goal_, candidates, id, grid_);
    goal_node = insert_node(tree_, *parent, goal_);
    return true;
  }

  const OccupancyGrid& grid_;
  Point start_;
  Point goal_;
  ResolvedParams params_;
  RngStream& rng_;
  PlanTree& tree_;
  std::vector<std::uint32_t> free_cells_;
};

// Copies the MST into a plan tree rooted at the start; returns the node id
// of every MST vertex (kNoNode for unreached ones).
std::vector<NodeId> seed_tree_from_mst(PlanTree& tree, const NodeGraph& graph,
                                       const SpanningTree& mst) {
  const auto n = graph.vertices.size();
  std::vector<std::vector<VertexId>> kids(n);
  for (VertexId v = 0; v < n; ++v) {
    if (mst.contains(v) && mst.parent[v] != kNoVertex) kids[mst.parent[v]].push_back(v);
  }
  std::vector<NodeId> node_of(n, kNoNode);
  node_of[mst.root] = PlanTree::root();
  std::queue<VertexId> queue;
  queue.push(mst.root);
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop();
    for (VertexId c : kids[v]) {
      node_of[c] = tree.add_node(graph.vertices[c], node_of[v]);
      queue.push(c);
    }
  }
  return node_of;
}

}  // namespace

PlanResult plan(PlannerKind kind, const OccupancyGrid& grid, Point start, Point goal,
                std::size_t iters, std::uint64_t seed, const PlannerParams& params) {
  const ResolvedParams rp = resolve(params, grid);
  if (!is_free(grid, start)) throw InvalidEndpoint("start is not in free space");
  if (!is_free(grid, goal)) throw InvalidEndpoint("goal is not in free space");

  PlanResult result{.kind = kind, .tree = PlanTree(start, grid.width(), grid.height(), rp.eta)};
  PlanTree& tree = result.tree;
  RngStream rng(seed);
  Search search(grid, start, goal, rp, rng, tree);

  if (kind == PlannerKind::Irrt) {
    std::size_t k = 0;
    while (search.goal_node == kNoNode && k < params.max_initial_iters) {
      ++k;
      search.iterate();
      result.cost_trace.push_back(search.best_cost());
    }
    if (search.goal_node == kNoNode) {
      result.initial_iteration = k;
      result.initial_cost = kInf;
      return result;
    }
    result.initial_iteration = k;
  } else {
    result.skeleton = thin(grid);
    result.nodes = structural_nodes(result.skeleton, params.harris);
    const NodeGraph graph = build_visibility_graph(grid, result.nodes, start, goal);
    const SpanningTree mst = prim_mst(graph, NodeGraph::kStart);
    result.init_path = extract_path(graph, mst, NodeGraph::kStart, NodeGraph::kGoal);
    const auto node_of = seed_tree_from_mst(tree, graph, mst);
    search.goal_node = node_of[NodeGraph::kGoal];

    if (kind == PlannerKind::Esirrt) {
      auto stages = hybrid_path_smoothing_stages(result.init_path, params.subsample_d,
                                                 params.spline_n, grid);
      const auto path_nodes = insert_smoothed_path(tree, stages.smooth);
      bidirectional_rewiring(tree, path_nodes, rp.rewire_radius, grid);
      result.spline_path = std::move(stages.spline);
      result.smooth_path = std::move(stages.smooth);
    }
    result.refined_path = tree.path_to(search.goal_node);
  }

  result.goal_node = search.goal_node;
  result.initial_cost = tree.cost(result.goal_node);
  for (std::size_t i = 0; i < iters; ++i) {
    search.iterate();
    result.cost_trace.push_back(search.best_cost());
  }
  result.path = tree.path_to(result.goal_node);
  return result;
}

}  // namespace esirrt
