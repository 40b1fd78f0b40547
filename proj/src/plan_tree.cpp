#include "esirrt/plan_tree.hpp"

#include <algorithm>
#include <cmath>

#include "esirrt/error.hpp"

namespace esirrt {

PlanTree::PlanTree(Point root, double width, double height, double index_cell)
    : index_(width, height, index_cell) {
  nodes_.push_back({root, kNoNode, 0.0});
  children_.emplace_back();
  index_.insert(0, root);
}

NodeId PlanTree::add_node(Point position, NodeId parent) {
  if (parent >= nodes_.size()) throw InvalidParameter("parent node out of range");
  const NodeId id = nodes_.size();
  nodes_.push_back({position, parent, nodes_[parent].cost + distance(nodes_[parent].position, position)});
  children_.emplace_back();
  children_[parent].push_back(id);
  index_.insert(id, position);
  return id;
}

bool PlanTree::is_ancestor(NodeId ancestor, NodeId id) const {
  for (NodeId v = id; v != kNoNode; v = nodes_[v].parent) {
    if (v == ancestor) return true;
  }
  return false;
}

void PlanTree::set_parent(NodeId id, NodeId new_parent) {
  if (id == root() || id >= nodes_.size() || new_parent >= nodes_.size())
    throw InvalidParameter("invalid re-parenting request");
  if (is_ancestor(id, new_parent)) throw InvalidParameter("re-parenting would create a cycle");
  const NodeId old_parent = nodes_[id].parent;
  if (old_parent == new_parent) return;
  auto& siblings = children_[old_parent];
  siblings.erase(std::find(siblings.begin(), siblings.end(), id));
  children_[new_parent].push_back(id);
  nodes_[id].parent = new_parent;
  refresh_subtree_costs(id);
}

void PlanTree::refresh_subtree_costs(NodeId id) {
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto& par = nodes_[nodes_[v].parent];
    nodes_[v].cost = par.cost + distance(par.position, nodes_[v].position);
    stack.insert(stack.end(), children_[v].begin(), children_[v].end());
  }
}

std::optional<NodeId> PlanTree::find_coincident(Point p, double tol) const {
  for (NodeId id : index_.within(p, tol * std::sqrt(2.0))) {
    if (nearly_equal(nodes_[id].position, p, tol)) return id;
  }
  return std::nullopt;
}

std::vector<NodeId> PlanTree::chain_to(NodeId id) const {
  std::vector<NodeId> chain;
  for (NodeId v = id; v != kNoNode; v = nodes_[v].parent) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

Path PlanTree::path_to(NodeId id) const {
  Path out;
  for (NodeId v : chain_to(id)) out.push_back(nodes_[v].position);
  return out;
}

TreeAudit audit_tree(const PlanTree& tree, const OccupancyGrid* grid, double cost_tol) {
  TreeAudit audit;
  const std::size_t n = tree.size();
  auto note = [&](const std::string& s) {
    if (audit.detail.size() < 2000) audit.detail += s + "; ";
  };

  if (tree.parent(PlanTree::root()) != kNoNode || tree.cost(PlanTree::root()) != 0.0) {
    audit.root_ok = false;
    note("root has a parent or non-zero cost");
  }

  std::vector<std::size_t> child_seen(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId c : tree.children(v)) {
      if (c >= n || tree.parent(c) != v) {
        audit.children_mirror_parents = false;
        note("child list of " + std::to_string(v) + " disagrees with parent links");
      } else {
        ++child_seen[c];
      }
    }
  }
  for (NodeId v = 1; v < n; ++v) {
    if (child_seen[v] != 1) {
      audit.children_mirror_parents = false;
      note("node " + std::to_string(v) + " listed " + std::to_string(child_seen[v]) + " times");
    }
  }

  for (NodeId v = 1; v < n; ++v) {
    const NodeId p = tree.parent(v);
    if (p == kNoNode || p >= n) {
      audit.acyclic = false;
      note("node " + std::to_string(v) + " has no valid parent");
      continue;
    }
    std::size_t steps = 0;
    NodeId w = v;
    while (w != kNoNode && steps <= n) {
      w = tree.parent(w);
      ++steps;
    }
    if (w != kNoNode) {
      audit.acyclic = false;
      note("parent chain from " + std::to_string(v) + " does not reach the root");
    }
    const double expected = tree.cost(p) + distance(tree.position(p), tree.position(v));
    const double err = std::abs(tree.cost(v) - expected);
    audit.max_cost_error = std::max(audit.max_cost_error, err);
    if (!(err <= cost_tol)) {
      audit.costs_consistent = false;
      note("cost mismatch at node " + std::to_string(v));
    }
    if (grid != nullptr && !obstacle_free(*grid, tree.position(p), tree.position(v))) {
      audit.edges_obstacle_free = false;
      note("edge " + std::to_string(p) + "->" + std::to_string(v) + " collides");
    }
  }
  return audit;
}

}  // namespace esirrt
