#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esirrt/geometry.hpp"
#include "esirrt/gridmap.hpp"
#include "esirrt/spatial_hash.hpp"

namespace esirrt {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct TreeNode {
  Point position;
  NodeId parent = kNoNode;
  double cost = 0.0;  // cost-to-come from the root
};

/// Rooted tree of planar states with cost-to-come. Node 0 is the root.
/// Nodes are never removed; only parent links change, and every parent
/// change refreshes the costs of the moved subtree.
class PlanTree {
 public:
  /// `width`/`height` bound the neighbour index; `index_cell` is its bucket size.
  PlanTree(Point root, double width, double height, double index_cell);

  static constexpr NodeId root() { return 0; }
  std::size_t size() const { return nodes_.size(); }

  const TreeNode& node(NodeId id) const { return nodes_[id]; }
  Point position(NodeId id) const { return nodes_[id].position; }
  NodeId parent(NodeId id) const { return nodes_[id].parent; }
  double cost(NodeId id) const { return nodes_[id].cost; }
  std::span<const NodeId> children(NodeId id) const { return children_[id]; }

  /// Appends a leaf under `parent`; its cost is parent cost + edge length.
  NodeId add_node(Point position, NodeId parent);

  /// Re-parents `id` under `new_parent` and recomputes the subtree costs.
  /// Throws InvalidParameter if that would close a cycle or touch the root.
  void set_parent(NodeId id, NodeId new_parent);

  /// True if `ancestor` lies on the parent chain of `id` (or equals it).
  bool is_ancestor(NodeId ancestor, NodeId id) const;

  /// Node ids within `radius` of `p`, ascending.
  std::vector<NodeId> within(Point p, double radius) const { return index_.within(p, radius); }

  /// Closest node; ties resolve to the lowest id.
  NodeId nearest(Point p) const { return index_.nearest(p); }

  std::optional<NodeId> find_coincident(Point p, double tol = 1e-9) const;

  /// Node ids from the root down to `id`.
  std::vector<NodeId> chain_to(NodeId id) const;
  Path path_to(NodeId id) const;

 private:
  void refresh_subtree_costs(NodeId id);

  std::vector<TreeNode> nodes_;
  std::vector<std::vector<NodeId>> children_;
  SpatialHash index_;
};

struct TreeAudit {
  bool acyclic = true;
  bool root_ok = true;
  bool children_mirror_parents = true;
  bool costs_consistent = true;
  bool edges_obstacle_free = true;
  double max_cost_error = 0.0;
  std::string detail;

  bool ok() const {
    return acyclic && root_ok && children_mirror_parents && costs_consistent && edges_obstacle_free;
  }
};

/// Exhaustive structural check. Edge collision checks are skipped when
/// `grid` is null.
TreeAudit audit_tree(const PlanTree& tree, const OccupancyGrid* grid, double cost_tol = 1e-9);

}  // namespace esirrt
