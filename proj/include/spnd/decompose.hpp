#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spnd/graph.hpp"

namespace spnd {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

enum class NodeKind { Leaf, Series, Parallel };

/// One node of a binary series-parallel parse tree.
///
/// Orientation invariants: a Series node with terminals (a, b) and join c has
/// left child (a, c) and right child (c, b); a Parallel node's children both
/// have terminals (a, b); a Leaf's terminals are its edge's endpoints.
struct DecompNode {
  NodeKind kind = NodeKind::Leaf;
  VertexId a = 0;
  VertexId b = 0;
  EdgeIndex edge = 0;      // Leaf only
  VertexId join = -1;      // Series only
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  NodeId parent = kNoNode;
  /// Source / sink lie strictly inside this subgraph (not equal to a or b).
  bool has_s = false;
  bool has_t = false;
};

class DecompTree {
 public:
  DecompTree() = default;
  /// Validates the arena: binary shape, orientation, one leaf per edge and
  /// interior flags consistent with their derivation from the children.
  DecompTree(std::vector<DecompNode> nodes, NodeId root, std::vector<EdgeRecord> edges, VertexId source,
             VertexId sink);

  const DecompNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<DecompNode>& nodes() const { return nodes_; }
  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  VertexId source() const { return source_; }
  VertexId sink() const { return sink_; }
  VertexId terminal_a() const { return node(root_).a; }
  VertexId terminal_b() const { return node(root_).b; }

  /// Children before parents, left subtree before right subtree.
  std::vector<NodeId> postorder() const;
  /// Edge indices of the leaves under `id`.
  std::vector<EdgeIndex> leaf_edges(NodeId id) const;

  /// `P(S(L(e1),L(e2))@1,L(e3))`
  std::string to_string() const;

 private:
  std::vector<DecompNode> nodes_;
  NodeId root_ = kNoNode;
  std::vector<EdgeRecord> edges_;
  VertexId source_ = 0;
  VertexId sink_ = 1;
};

/// Thrown when the graph is not two-terminal series-parallel.
class NotSeriesParallel : public std::runtime_error {
 public:
  NotSeriesParallel(std::string reason, std::string witness);
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

/// Builds the parse tree by repeated parallel and series reductions.
/// With declared terminals recognition is relative to them; otherwise
/// candidate pairs are tried (pairs of degree-1 vertices first) and the first
/// pair that reduces completely is used.
DecompTree decompose(const MultiGraph& g);

/// Reduction relative to a fixed terminal pair; throws NotSeriesParallel.
DecompTree decompose(const MultiGraph& g, VertexId a, VertexId b);

/// Rebuilds a multigraph from the tree by composing bottom-up. Vertices are
/// freshly numbered: root terminals become 0 and 1, the rest follow in
/// creation order. Edge ids, costs and capacities are preserved, as are the
/// source/sink (mapped to their new numbers) and the root terminal pair.
MultiGraph recompose(const DecompTree& tree);

/// Free-function form of DecompTree::postorder.
std::vector<NodeId> postorder(const DecompTree& tree);

}  // namespace spnd
