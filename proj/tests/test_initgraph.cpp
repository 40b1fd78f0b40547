#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "doctest.h"
#include "esirrt/error.hpp"
#include "esirrt/initgraph.hpp"
#include "esirrt/skeleton.hpp"
#include "support.hpp"

using esirrt::CornerSet;
using esirrt::GraphEdge;
using esirrt::NodeGraph;
using esirrt::Point;
using esirrt::VertexId;

namespace {

std::vector<VertexId> bfs_tree_path(const esirrt::SpanningTree& t, VertexId s, VertexId g) {
  const auto n = t.parent.size();
  std::vector<std::vector<VertexId>> adj(n);
  for (VertexId v = 0; v < n; ++v)
    if (t.parent[v] != esirrt::kNoVertex) {
      adj[v].push_back(t.parent[v]);
      adj[t.parent[v]].push_back(v);
    }
  std::vector<VertexId> prev(n, esirrt::kNoVertex);
  std::vector<bool> seen(n, false);
  std::queue<VertexId> q;
  q.push(s);
  seen[s] = true;
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    for (auto w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        prev[w] = v;
        q.push(w);
      }
  }
  std::vector<VertexId> path{g};
  while (path.back() != s) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

using testing::abstract_graph;
using testing::random_connected_graph;

TEST_CASE("visibility graph on an empty grid is complete") {
  const auto g = testing::open_grid(20, 20);
  const CornerSet corners{{{5.5, 15.5}, {15.5, 5.5}}};
  const auto graph = esirrt::build_visibility_graph(g, corners, {2.5, 2.5}, {17.5, 17.5});
  CHECK(graph.vertices.size() == 4);
  CHECK(graph.edges.size() == 6);
  CHECK(graph.vertices[NodeGraph::kStart] == Point{2.5, 2.5});
  CHECK(graph.vertices[NodeGraph::kGoal] == Point{17.5, 17.5});
  for (const auto& e : graph.edges) {
    CHECK(e.u < e.v);
    CHECK(e.weight == doctest::Approx(esirrt::distance(graph.vertices[e.u], graph.vertices[e.v])));
  }
}

TEST_CASE("visibility graph through a gap matches the pairwise oracle") {
  std::vector<std::string> rows(20, std::string(30, '.'));
  for (int j = 0; j < 20; ++j)
    if (j < 9 || j > 11) rows[j][15] = '#';
  const auto g = testing::grid_from_ascii(rows);
  const CornerSet corners{{{10.5, 10.5}, {20.5, 10.5}, {10.5, 3.5}, {20.5, 16.5}, {14.5, 10.5}}};
  const auto graph = esirrt::build_visibility_graph(g, corners, {3.5, 3.5}, {26.5, 3.5});
  std::set<std::pair<VertexId, VertexId>> expected, actual;
  for (VertexId u = 0; u < graph.vertices.size(); ++u)
    for (VertexId v = u + 1; v < graph.vertices.size(); ++v)
      if (testing::oracle_obstacle_free(g, graph.vertices[u], graph.vertices[v])) expected.insert({u, v});
  for (const auto& e : graph.edges) actual.insert({e.u, e.v});
  CHECK(actual == expected);
  // Every edge crossing the wall column passes through the gap rows.
  for (const auto& e : graph.edges) {
    const auto a = graph.vertices[e.u], b = graph.vertices[e.v];
    if ((a.x < 15) != (b.x < 15)) {
      const double t = (15.5 - a.x) / (b.x - a.x);
      const double y = a.y + t * (b.y - a.y);
      CHECK(y > 9.0);
      CHECK(y < 12.0);
    }
  }
  CHECK(actual.count({0, 1}) == 0);
}

TEST_CASE("visibility graph merges nearby corners and rejects bad endpoints") {
  const auto g = testing::open_grid(20, 20);
  const CornerSet corners{{{2.9, 2.5}, {10.5, 10.5}, {10.5, 11.2}, {12.5, 10.5}}};
  const auto graph = esirrt::build_visibility_graph(g, corners, {2.5, 2.5}, {17.5, 17.5});
  CHECK(graph.vertices.size() == 4);
  CHECK(graph.vertices[2] == Point{10.5, 10.5});
  CHECK(graph.vertices[3] == Point{12.5, 10.5});

  CHECK_THROWS_AS(esirrt::build_visibility_graph(g, corners, {2.5, 2.5}, {2.5, 2.5}), esirrt::InvalidEndpoint);
  const auto blocked = testing::grid_from_ascii({"#...", "....", "...."});
  CHECK_THROWS_AS(esirrt::build_visibility_graph(blocked, {}, {0.5, 0.5}, {3.5, 2.5}), esirrt::InvalidEndpoint);
  CHECK_THROWS_AS(esirrt::build_visibility_graph(blocked, {}, {3.5, 2.5}, {0.5, 0.5}), esirrt::InvalidEndpoint);
  CHECK_THROWS_AS(esirrt::build_visibility_graph(blocked, {}, {3.5, 2.5}, {9.5, 0.5}), esirrt::InvalidEndpoint);
}

TEST_CASE("prim on small graphs") {
  const auto path = abstract_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(esirrt::prim_mst(path, 0).total_weight == 2.0);

  const auto tri = abstract_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
  const auto t = esirrt::prim_mst(tri, 0);
  CHECK(t.total_weight == 3.0);
  CHECK(t.parent[1] == 0);
  CHECK(t.parent[2] == 1);
  CHECK(t.parent[0] == esirrt::kNoVertex);
}

TEST_CASE("prim breaks equal weights toward the lowest index") {
  // Vertices 1 and 2 are both one unit from the root, 3 hangs off either.
  const auto g = abstract_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}});
  const auto t = esirrt::prim_mst(g, 0);
  CHECK(t.parent[3] == 1);
}

TEST_CASE("prim total weight equals Kruskal on random graphs") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_connected_graph(rng, trial % 2 == 0);
    const auto t = esirrt::prim_mst(g, 0);
    INFO("trial " << trial);
    const double kruskal = testing::kruskal_weight(g.vertices.size(), g.edges);
    if (trial % 2 == 0) CHECK(t.total_weight == kruskal);
    else CHECK(t.total_weight == doctest::Approx(kruskal).epsilon(1e-12));
    std::size_t tree_edges = 0;
    for (VertexId v = 0; v < g.vertices.size(); ++v) {
      CHECK(t.contains(v));
      if (t.parent[v] == esirrt::kNoVertex) continue;
      ++tree_edges;
      const auto key = std::minmax(v, t.parent[v]);
      CHECK(std::any_of(g.edges.begin(), g.edges.end(),
                        [&](const GraphEdge& e) { return e.u == key.first && e.v == key.second; }));
    }
    CHECK(tree_edges == g.vertices.size() - 1);
  }
}

TEST_CASE("prim spans only the component of the root") {
  const auto g = abstract_graph(5, {{0, 2, 1.0}, {1, 3, 1.0}, {3, 4, 2.0}});
  const auto t = esirrt::prim_mst(g, 0);
  CHECK(t.contains(0));
  CHECK(t.contains(2));
  CHECK_FALSE(t.contains(1));
  CHECK_FALSE(t.contains(3));
  CHECK(t.total_weight == 1.0);
  CHECK_THROWS_AS(esirrt::extract_vertex_path(t, 0, 1), esirrt::DisconnectedGraph);
  try {
    esirrt::extract_vertex_path(t, 0, 1);
  } catch (const esirrt::DisconnectedGraph& e) {
    CHECK(std::string(e.what()).find("0 2") != std::string::npos);
  }
}

TEST_CASE("extract_path examples") {
  NodeGraph g;
  g.vertices = {{0, 0}, {4, 0}, {2, 1}};
  g.edges = {{0, 2, esirrt::distance(g.vertices[0], g.vertices[2])},
             {1, 2, esirrt::distance(g.vertices[1], g.vertices[2])}};
  const auto t = esirrt::prim_mst(g, 0);
  CHECK(esirrt::extract_path(g, t, 0, 1) == esirrt::Path{{0, 0}, {2, 1}, {4, 0}});
  CHECK(esirrt::extract_path(g, t, 0, 0) == esirrt::Path{{0, 0}});
  CHECK(esirrt::extract_path(g, t, 1, 0) == esirrt::Path{{4, 0}, {2, 1}, {0, 0}});
}

TEST_CASE("extract_vertex_path equals the BFS path on random trees") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
    std::vector<VertexId> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::shuffle(label.begin() + 1, label.end(), rng);
    esirrt::SpanningTree t;
    t.root = label[0];
    t.parent.assign(n, esirrt::kNoVertex);
    t.reached.assign(n, true);
    for (std::size_t k = 1; k < n; ++k)
      t.parent[label[k]] = label[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)];
    std::uniform_int_distribution<VertexId> any(0, n - 1);
    const auto s = any(rng), g = any(rng);
    const auto path = esirrt::extract_vertex_path(t, s, g);
    CHECK(path == bfs_tree_path(t, s, g));
    CHECK(std::set<VertexId>(path.begin(), path.end()).size() == path.size());
  }
}

TEST_CASE("initial paths on the bundled maps are collision-free and simple") {
  for (const auto& m : {testing::kMultiRoom, testing::kNarrowPassage, testing::kLCorridor}) {
    INFO(m.file);
    const auto grid = testing::load_map(m);
    const auto nodes = esirrt::structural_nodes(esirrt::thin(grid));
    const auto graph = esirrt::build_visibility_graph(grid, nodes, m.start, m.goal);
    for (const auto& e : graph.edges) CHECK(esirrt::obstacle_free(grid, graph.vertices[e.u], graph.vertices[e.v]));
    const auto tree = esirrt::prim_mst(graph, NodeGraph::kStart);
    const auto ids = esirrt::extract_vertex_path(tree, NodeGraph::kStart, NodeGraph::kGoal);
    CHECK(std::set<VertexId>(ids.begin(), ids.end()).size() == ids.size());
    const auto path = esirrt::extract_path(graph, tree, NodeGraph::kStart, NodeGraph::kGoal);
    CHECK(path.front() == m.start);
    CHECK(path.back() == m.goal);
    CHECK(esirrt::path_obstacle_free(grid, path));
    CHECK(tree.total_weight == doctest::Approx(testing::kruskal_weight(graph.vertices.size(), graph.edges)));
  }
}
