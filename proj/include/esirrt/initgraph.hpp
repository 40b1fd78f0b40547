#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "esirrt/geometry.hpp"
#include "esirrt/gridmap.hpp"
#include "esirrt/skeleton.hpp"

namespace esirrt {

using VertexId = std::size_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct GraphEdge {
  VertexId u;
  VertexId v;
  double weight;
};

/// Weighted undirected graph over structural nodes plus start and goal.
/// Vertex 0 is always the start and vertex 1 the goal.
struct NodeGraph {
  static constexpr VertexId kStart = 0;
  static constexpr VertexId kGoal = 1;

  std::vector<Point> vertices;
  std::vector<GraphEdge> edges;  // u < v, sorted lexicographically
};

struct SpanningTree {
  VertexId root = kNoVertex;
  std::vector<VertexId> parent;  // kNoVertex for the root and unreached vertices
  std::vector<bool> reached;
  double total_weight = 0.0;

  bool contains(VertexId v) const { return v < reached.size() && reached[v]; }
};

/// Vertices are start, goal, then every corner not within 1 px of a vertex
/// already kept. An edge joins each pair with a free straight line of sight.
/// Throws InvalidEndpoint if start or goal is occupied or they coincide.
NodeGraph build_visibility_graph(const OccupancyGrid& grid, const CornerSet& corners, Point start,
                                 Point goal);

/// Prim's algorithm from `root` over the vertices reachable from it. Among
/// frontier edges of equal weight, the lowest vertex index is taken first.
SpanningTree prim_mst(const NodeGraph& graph, VertexId root);

/// Vertex sequence of the unique tree path from `start` to `goal`.
/// Throws DisconnectedGraph when either vertex is not in the tree.
std::vector<VertexId> extract_vertex_path(const SpanningTree& tree, VertexId start, VertexId goal);

Path extract_path(const NodeGraph& graph, const SpanningTree& tree, VertexId start, VertexId goal);

}  // namespace esirrt
