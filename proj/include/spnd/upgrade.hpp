#pragma once

#include <string>
#include <vector>

#include "spnd/graph.hpp"
#include "spnd/max_flow.hpp"

namespace spnd {

/// Bookkeeping for one expanded `upedge`.
struct Gadget {
  std::string id;
  VertexId u = 0, v = 0;
  /// Menu after sorting by capacity and dropping equal-capacity duplicates.
  std::vector<UpgradeChoice> choices;
  /// 1-based position of each kept choice in the input menu.
  std::vector<std::size_t> input_index;
  /// Expanded edge carrying each kept choice.
  std::vector<EdgeIndex> choice_edge;
  /// Guard pairs by level: guards[0] wraps choices 1 and 2, guards[i] wraps
  /// choice i + 2 and everything inside it.
  std::vector<std::pair<EdgeIndex, EdgeIndex>> guards;

  std::size_t edge_count() const;
  /// Guards that must be bought for choice `i` (0-based, sorted order).
  std::vector<EdgeIndex> guards_for(std::size_t i) const;
};

struct GadgetMap {
  std::size_t plain_edges = 0;  // expanded edges [0, plain_edges) are the input edges
  VertexId original_vertices = 0;
  std::vector<Gadget> gadgets;
  std::vector<std::string> warnings;
};

struct Expansion {
  ProblemInstance instance;  // no upgrade menus left
  GadgetMap map;
};

/// Replaces every upgrade menu by a series-parallel gadget of plain edges.
/// A menu of k choices becomes 3k - 2 edges over 2k vertices.
Expansion expand_upgrades(const ProblemInstance& instance);

struct GadgetDecision {
  std::string id;
  std::size_t choice = 0;  // 1-based input position; 0 if nothing bought
  UpgradeChoice value;
};

struct MappedSolution {
  std::vector<GadgetDecision> decisions;
  /// Expanded solution with the free guards of every bought choice added.
  Solution normalized;
  /// Plain edges bought plus one (cost, capacity) edge per decided gadget,
  /// evaluated on the original topology.
  Cost cost = 0;
  Flow flow = 0;
  std::vector<std::string> warnings;
};

/// Reads one choice per gadget from a solution of the expanded instance.
/// Missing guards of bought choices are added first (they cost nothing); the
/// gadget's choice is then its highest-capacity bought choice edge. Throws
/// std::logic_error if the interpreted instance does worse than the
/// normalized expanded solution.
MappedSolution map_back(const ProblemInstance& expanded, const GadgetMap& map, const Solution& solution);

}  // namespace spnd
