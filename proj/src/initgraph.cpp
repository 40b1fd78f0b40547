#include "esirrt/initgraph.hpp"

#include <algorithm>
#include <string>

#include "esirrt/error.hpp"

namespace esirrt {

namespace {

constexpr double kMergeRadius = 1.0;

std::string format_point(Point p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

}  // namespace

NodeGraph build_visibility_graph(const OccupancyGrid& grid, const CornerSet& corners, Point start,
                                 Point goal) {
  if (!is_free(grid, start)) throw InvalidEndpoint("start " + format_point(start) + " is not free");
  if (!is_free(grid, goal)) throw InvalidEndpoint("goal " + format_point(goal) + " is not free");
  if (distance(start, goal) < 1e-9) throw InvalidEndpoint("start and goal coincide");

  NodeGraph graph;
  graph.vertices = {start, goal};
  for (Point c : corners.corners) {
    const bool merged = std::any_of(graph.vertices.begin(), graph.vertices.end(),
                                    [&](Point v) { return distance(c, v) <= kMergeRadius; });
    if (!merged) graph.vertices.push_back(c);
  }

  const auto n = graph.vertices.size();
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (obstacle_free(grid, graph.vertices[u], graph.vertices[v]))
        graph.edges.push_back({u, v, distance(graph.vertices[u], graph.vertices[v])});
    }
  }
  return graph;
}

SpanningTree prim_mst(const NodeGraph& graph, VertexId root) {
  const auto n = graph.vertices.size();
  if (root >= n) throw InvalidParameter("MST root out of range");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, kInf));
  for (const auto& e : graph.edges) {
    weight[e.u][e.v] = std::min(weight[e.u][e.v], e.weight);
    weight[e.v][e.u] = weight[e.u][e.v];
  }

  SpanningTree tree;
  tree.root = root;
  tree.parent.assign(n, kNoVertex);
  tree.reached.assign(n, false);
  std::vector<double> best(n, kInf);
  best[root] = 0.0;

  // Dense O(V^2) Prim; scanning in index order with strict < keeps the
  // lowest index among equal-weight candidates.
  for (std::size_t step = 0; step < n; ++step) {
    VertexId pick = kNoVertex;
    for (VertexId v = 0; v < n; ++v) {
      if (!tree.reached[v] && best[v] < kInf && (pick == kNoVertex || best[v] < best[pick])) pick = v;
    }
    if (pick == kNoVertex) break;
    tree.reached[pick] = true;
    if (pick != root) tree.total_weight += best[pick];
    for (VertexId v = 0; v < n; ++v) {
      if (!tree.reached[v] && weight[pick][v] < best[v]) {
        best[v] = weight[pick][v];
        tree.parent[v] = pick;
      }
    }
  }
  return tree;
}

std::vector<VertexId> extract_vertex_path(const SpanningTree& tree, VertexId start, VertexId goal) {
  if (!tree.contains(start) || !tree.contains(goal)) {
    std::string msg = "goal vertex " + std::to_string(goal) + " is not connected to start vertex " +
                      std::to_string(start) + "; vertices reached from the root:";
    for (VertexId v = 0; v < tree.reached.size(); ++v) {
      if (tree.reached[v]) msg += " " + std::to_string(v);
    }
    throw DisconnectedGraph(msg);
  }
  auto chain_to_root = [&](VertexId v) {
    std::vector<VertexId> chain{v};
    while (tree.parent[chain.back()] != kNoVertex) chain.push_back(tree.parent[chain.back()]);
    return chain;
  };
  auto from_start = chain_to_root(start);
  auto from_goal = chain_to_root(goal);
  // Strip the shared suffix above the lowest common ancestor.
  while (from_start.size() > 1 && from_goal.size() > 1 &&
         from_start[from_start.size() - 2] == from_goal[from_goal.size() - 2]) {
    from_start.pop_back();
    from_goal.pop_back();
  }
  std::vector<VertexId> path(from_start.begin(), from_start.end());
  path.insert(path.end(), from_goal.rbegin() + 1, from_goal.rend());
  return path;
}

Path extract_path(const NodeGraph& graph, const SpanningTree& tree, VertexId start, VertexId goal) {
  Path out;
  for (auto v : extract_vertex_path(tree, start, goal)) out.push_back(graph.vertices[v]);
  return out;
}

}  // namespace esirrt
