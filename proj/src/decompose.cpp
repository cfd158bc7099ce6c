#include "spnd/decompose.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace spnd {

NotSeriesParallel::NotSeriesParallel(std::string reason, std::string witness)
    : std::runtime_error(std::move(reason)), witness_(std::move(witness)) {}

namespace {

bool same_pair(VertexId x1, VertexId y1, VertexId x2, VertexId y2) {
  return (x1 == x2 && y1 == y2) || (x1 == y2 && y1 == x2);
}

// Interior flags of `n` as derived from its children and join vertex.
std::pair<bool, bool> derive_interior(const std::vector<DecompNode>& nodes, const DecompNode& n, VertexId s,
                                      VertexId t) {
  if (n.kind == NodeKind::Leaf) return {false, false};
  const auto& l = nodes[static_cast<std::size_t>(n.left)];
  const auto& r = nodes[static_cast<std::size_t>(n.right)];
  bool has_s = l.has_s || r.has_s;
  bool has_t = l.has_t || r.has_t;
  if (n.kind == NodeKind::Series) {
    has_s = has_s || n.join == s;
    has_t = has_t || n.join == t;
  }
  if (s == n.a || s == n.b) has_s = false;
  if (t == n.a || t == n.b) has_t = false;
  return {has_s, has_t};
}

}  // namespace

DecompTree::DecompTree(std::vector<DecompNode> nodes, NodeId root, std::vector<EdgeRecord> edges, VertexId source,
                       VertexId sink)
    : nodes_(std::move(nodes)), root_(root), edges_(std::move(edges)), source_(source), sink_(sink) {
  auto bad = [](const std::string& msg) { throw std::invalid_argument("malformed decomposition tree: " + msg); };
  if (nodes_.empty() || root_ < 0 || static_cast<std::size_t>(root_) >= nodes_.size()) bad("no root");
  if (nodes_.size() != 2 * edges_.size() - 1) bad("node count is not 2m-1");
  std::vector<int> leaf_seen(edges_.size(), 0);
  for (const auto& id : postorder()) {
    const auto& n = node(id);
    switch (n.kind) {
      case NodeKind::Leaf: {
        if (n.edge >= edges_.size()) bad("leaf edge out of range");
        ++leaf_seen[n.edge];
        const auto& e = edges_[n.edge];
        if (!same_pair(n.a, n.b, e.u, e.v)) bad("leaf terminals differ from edge endpoints");
        break;
      }
      case NodeKind::Series: {
        const auto& l = node(n.left);
        const auto& r = node(n.right);
        if (l.a != n.a || l.b != n.join || r.a != n.join || r.b != n.b) bad("series orientation");
        break;
      }
      case NodeKind::Parallel: {
        const auto& l = node(n.left);
        const auto& r = node(n.right);
        if (l.a != n.a || l.b != n.b || r.a != n.a || r.b != n.b) bad("parallel orientation");
        break;
      }
    }
    if (n.kind != NodeKind::Leaf && (node(n.left).parent != id || node(n.right).parent != id)) bad("parent links");
    auto [s_in, t_in] = derive_interior(nodes_, n, source_, sink_);
    if (s_in != n.has_s || t_in != n.has_t) bad("interior flags disagree with derivation");
  }
  if (std::any_of(leaf_seen.begin(), leaf_seen.end(), [](int c) { return c != 1; })) bad("leaf/edge bijection");
}

std::vector<NodeId> DecompTree::postorder() const {
  std::vector<NodeId> order;
  order.reserve(nodes_.size());
  // Iterative: (node, expanded) pairs.
  std::vector<std::pair<NodeId, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const auto& n = node(id);
    if (n.kind == NodeKind::Leaf || expanded) {
      order.push_back(id);
      if (order.size() > nodes_.size()) throw std::invalid_argument("malformed decomposition tree: cycle");
      continue;
    }
    stack.push_back({id, true});
    stack.push_back({n.right, false});
    stack.push_back({n.left, false});
  }
  return order;
}

std::vector<EdgeIndex> DecompTree::leaf_edges(NodeId id) const {
  std::vector<EdgeIndex> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const auto& n = node(stack.back());
    stack.pop_back();
    if (n.kind == NodeKind::Leaf) {
      out.push_back(n.edge);
    } else {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
  return out;
}

std::string DecompTree::to_string() const {
  std::ostringstream out;
  std::function<void(NodeId)> emit = [&](NodeId id) {
    const auto& n = node(id);
    switch (n.kind) {
      case NodeKind::Leaf:
        out << "L(" << edges_[n.edge].id << ')';
        break;
      case NodeKind::Series:
        out << "S(";
        emit(n.left);
        out << ',';
        emit(n.right);
        out << ")@" << n.join;
        break;
      case NodeKind::Parallel:
        out << "P(";
        emit(n.left);
        out << ',';
        emit(n.right);
        out << ')';
        break;
    }
  };
  emit(root_);
  return out.str();
}

std::vector<NodeId> postorder(const DecompTree& tree) { return tree.postorder(); }

namespace {

// Reduction state: live virtual edges, each standing for a subtree.
class Reducer {
 public:
  Reducer(const MultiGraph& g, VertexId a, VertexId b) : g_(g), a_(a), b_(b) {
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      DecompNode leaf;
      leaf.kind = NodeKind::Leaf;
      leaf.edge = e;
      leaf.a = g.edge(e).u;
      leaf.b = g.edge(e).v;
      nodes_.push_back(leaf);
      live_.push_back({static_cast<NodeId>(e), e});
    }
  }

  DecompTree run() {
    while (live_.size() > 1) {
      if (reduce_parallel()) continue;
      if (reduce_series()) continue;
      throw NotSeriesParallel("not series-parallel", witness());
    }
    const auto& last = node(live_[0].node);
    if (!same_pair(last.a, last.b, a_, b_)) throw NotSeriesParallel("not series-parallel", witness());
    if (last.a != a_) flip(live_[0].node);
    NodeId root = live_[0].node;
    fill_interior(root);
    std::vector<EdgeRecord> edges(g_.edges().begin(), g_.edges().end());
    return DecompTree(std::move(nodes_), root, std::move(edges), g_.source(), g_.sink());
  }

 private:
  struct Live {
    NodeId node;
    EdgeIndex key;  // smallest original edge index underneath
  };

  DecompNode& node(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }

  // Reverses the terminal orientation of a subtree.
  void flip(NodeId id) {
    auto& n = node(id);
    std::swap(n.a, n.b);
    if (n.kind == NodeKind::Series) std::swap(n.left, n.right);
    if (n.kind != NodeKind::Leaf) {
      NodeId l = n.left, r = n.right;
      flip(l);
      flip(r);
    }
  }

  NodeId make(NodeKind kind, NodeId left, NodeId right, VertexId a, VertexId b, VertexId join) {
    DecompNode n;
    n.kind = kind;
    n.left = left;
    n.right = right;
    n.a = a;
    n.b = b;
    n.join = join;
    auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(n);
    node(left).parent = id;
    node(right).parent = id;
    return id;
  }

  // Merges the two parallel virtual edges whose smaller key is smallest.
  bool reduce_parallel() {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      const auto& ni = node(live_[i].node);
      for (std::size_t j = i + 1; j < live_.size(); ++j) {
        const auto& nj = node(live_[j].node);
        if (!same_pair(ni.a, ni.b, nj.a, nj.b)) continue;
        auto lo = std::minmax(live_[i].key, live_[j].key);
        if (!best || lo < std::minmax(live_[best->first].key, live_[best->second].key)) best = {i, j};
      }
    }
    if (!best) return false;
    auto [i, j] = *best;
    if (live_[j].key < live_[i].key) std::swap(i, j);
    NodeId left = live_[i].node, right = live_[j].node;
    if (node(right).a != node(left).a) flip(right);
    NodeId p = make(NodeKind::Parallel, left, right, node(left).a, node(left).b, -1);
    replace(i, j, p);
    return true;
  }

  // Contracts the degree-2 non-terminal vertex whose incident keys are smallest.
  bool reduce_series() {
    std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(g_.vertex_count()));
    for (std::size_t i = 0; i < live_.size(); ++i) {
      const auto& n = node(live_[i].node);
      incident[static_cast<std::size_t>(n.a)].push_back(i);
      incident[static_cast<std::size_t>(n.b)].push_back(i);
    }
    std::optional<VertexId> best;
    std::pair<EdgeIndex, EdgeIndex> best_keys;
    for (VertexId v = 0; v < g_.vertex_count(); ++v) {
      const auto& inc = incident[static_cast<std::size_t>(v)];
      if (v == a_ || v == b_ || inc.size() != 2) continue;
      std::pair<EdgeIndex, EdgeIndex> keys = std::minmax(live_[inc[0]].key, live_[inc[1]].key);
      if (!best || keys < best_keys) {
        best = v;
        best_keys = keys;
      }
    }
    if (!best) return false;
    VertexId c = *best;
    auto i = incident[static_cast<std::size_t>(c)][0];
    auto j = incident[static_cast<std::size_t>(c)][1];
    if (live_[j].key < live_[i].key) std::swap(i, j);
    NodeId left = live_[i].node, right = live_[j].node;
    if (node(left).b != c) flip(left);
    if (node(right).a != c) flip(right);
    NodeId s = make(NodeKind::Series, left, right, node(left).a, node(right).b, c);
    replace(i, j, s);
    return true;
  }

  void replace(std::size_t i, std::size_t j, NodeId merged) {
    EdgeIndex key = std::min(live_[i].key, live_[j].key);
    live_[i] = {merged, key};
    live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(j));
  }

  void fill_interior(NodeId root) {
    std::vector<NodeId> order = postorder_of(root);
    for (auto id : order) {
      auto [hs, ht] = derive_interior(nodes_, node(id), g_.source(), g_.sink());
      node(id).has_s = hs;
      node(id).has_t = ht;
    }
  }

  std::vector<NodeId> postorder_of(NodeId root) {
    std::vector<NodeId> out;
    std::function<void(NodeId)> walk = [&](NodeId id) {
      const auto& n = node(id);
      if (n.kind != NodeKind::Leaf) {
        walk(n.left);
        walk(n.right);
      }
      out.push_back(id);
    };
    walk(root);
    return out;
  }

  std::string witness() {
    std::ostringstream out;
    out << "irreducible remainder for terminals (" << a_ << ',' << b_ << "): " << live_.size() << " edges {";
    for (std::size_t i = 0; i < live_.size(); ++i) {
      const auto& n = node(live_[i].node);
      out << (i ? " " : "") << n.a << '-' << n.b;
    }
    out << '}';
    return out.str();
  }

  const MultiGraph& g_;
  VertexId a_, b_;
  std::vector<DecompNode> nodes_;
  std::vector<Live> live_;
};

void require_connected(const MultiGraph& g) {
  if (g.edge_count() == 0) throw NotSeriesParallel("not series-parallel", "graph has no edges");
  std::vector<VertexId> parent(static_cast<std::size_t>(g.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<VertexId(VertexId)> find = [&](VertexId v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    return v;
  };
  for (const auto& e : g.edges()) parent[static_cast<std::size_t>(find(e.u))] = find(e.v);
  for (VertexId v = 1; v < g.vertex_count(); ++v)
    if (find(v) != find(0))
      throw NotSeriesParallel("not series-parallel", "graph is disconnected (vertex " + std::to_string(v) +
                                                         " not reachable from vertex 0)");
}

}  // namespace

DecompTree decompose(const MultiGraph& g, VertexId a, VertexId b) {
  require_connected(g);
  if (a == b || a < 0 || b < 0 || a >= g.vertex_count() || b >= g.vertex_count())
    throw std::invalid_argument("invalid terminal pair");
  return Reducer(g, a, b).run();
}

DecompTree decompose(const MultiGraph& g) {
  require_connected(g);
  if (auto t = g.declared_terminals()) return decompose(g, t->first, t->second);

  std::vector<int> degree(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const auto& e : g.edges()) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  std::vector<VertexId> leaves;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (degree[static_cast<std::size_t>(v)] == 1) leaves.push_back(v);

  std::vector<std::pair<VertexId, VertexId>> candidates;
  if (leaves.size() > 2)
    throw NotSeriesParallel("not series-parallel", std::to_string(leaves.size()) + " vertices of degree 1");
  if (leaves.size() == 2) {
    candidates.push_back({leaves[0], leaves[1]});
  } else if (leaves.size() == 1) {
    for (VertexId w = 0; w < g.vertex_count(); ++w)
      if (w != leaves[0]) candidates.push_back({std::min(leaves[0], w), std::max(leaves[0], w)});
  } else {
    for (VertexId x = 0; x < g.vertex_count(); ++x)
      for (VertexId y = x + 1; y < g.vertex_count(); ++y) candidates.push_back({x, y});
  }

  std::string first_witness;
  for (auto [x, y] : candidates) {
    try {
      return Reducer(g, x, y).run();
    } catch (const NotSeriesParallel& e) {
      if (first_witness.empty()) first_witness = e.witness();
    }
  }
  throw NotSeriesParallel("not series-parallel",
                          "no terminal pair admits a complete reduction; " + first_witness);
}

MultiGraph recompose(const DecompTree& tree) {
  // A fragment numbers its own vertices 0..k-1; 0 and 1 are its terminals.
  struct Fragment {
    std::vector<VertexId> original;  // fresh vertex -> vertex label in the tree
    std::vector<std::tuple<VertexId, VertexId, EdgeIndex>> edges;
  };

  std::vector<Fragment> built(tree.size());
  for (auto id : tree.postorder()) {
    const auto& n = tree.node(id);
    Fragment f;
    if (n.kind == NodeKind::Leaf) {
      f.original = {n.a, n.b};
      f.edges.push_back({0, 1, n.edge});
    } else {
      auto& l = built[static_cast<std::size_t>(n.left)];
      auto& r = built[static_cast<std::size_t>(n.right)];
      // Left fragment keeps its numbering; right fragment's vertices are
      // appended, except those identified with left terminals.
      f = std::move(l);
      std::vector<VertexId> remap(r.original.size());
      if (n.kind == NodeKind::Series) {
        // left = (a, c), right = (c, b): identify left.b with right.a.
        // New terminals: left.a stays 0; right.b becomes 1.
        VertexId join_fresh = 1;
        f.original[1] = n.join;
        remap[0] = join_fresh;
        remap[1] = static_cast<VertexId>(f.original.size());
        f.original.push_back(r.original[1]);
        for (std::size_t v = 2; v < r.original.size(); ++v) {
          remap[v] = static_cast<VertexId>(f.original.size());
          f.original.push_back(r.original[v]);
        }
        for (auto [u, v, e] : r.edges) f.edges.push_back({remap[static_cast<std::size_t>(u)], remap[static_cast<std::size_t>(v)], e});
        // Swap fresh ids so the new b terminal sits at index 1.
        VertexId new_b = remap[1];
        std::swap(f.original[1], f.original[static_cast<std::size_t>(new_b)]);
        for (auto& [u, v, e] : f.edges) {
          if (u == 1) u = new_b; else if (u == new_b) u = 1;
          if (v == 1) v = new_b; else if (v == new_b) v = 1;
        }
      } else {
        remap[0] = 0;
        remap[1] = 1;
        for (std::size_t v = 2; v < r.original.size(); ++v) {
          remap[v] = static_cast<VertexId>(f.original.size());
          f.original.push_back(r.original[v]);
        }
        for (auto [u, v, e] : r.edges) f.edges.push_back({remap[static_cast<std::size_t>(u)], remap[static_cast<std::size_t>(v)], e});
      }
      r = Fragment{};
    }
    built[static_cast<std::size_t>(id)] = std::move(f);
  }

  auto& root = built[static_cast<std::size_t>(tree.root())];
  auto fresh_of = [&](VertexId orig) -> VertexId {
    for (std::size_t v = 0; v < root.original.size(); ++v)
      if (root.original[v] == orig) return static_cast<VertexId>(v);
    throw std::invalid_argument("vertex " + std::to_string(orig) + " missing from recomposed graph");
  };
  std::sort(root.edges.begin(), root.edges.end(),
            [](const auto& x, const auto& y) { return std::get<2>(x) < std::get<2>(y); });
  std::vector<EdgeRecord> edges;
  for (auto [u, v, e] : root.edges) {
    EdgeRecord rec = tree.edges()[e];
    rec.u = u;
    rec.v = v;
    edges.push_back(std::move(rec));
  }
  return MultiGraph(static_cast<VertexId>(root.original.size()), std::move(edges), fresh_of(tree.source()),
                    fresh_of(tree.sink()), std::pair<VertexId, VertexId>{0, 1});
}

}  // namespace spnd
