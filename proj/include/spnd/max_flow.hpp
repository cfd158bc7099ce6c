#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "spnd/graph.hpp"

namespace spnd {

struct MaxFlowResult {
  Flow value = 0;
  /// Net flow on each edge from `edge.u` to `edge.v` (negative means v -> u).
  /// Zero for edges that were not purchased.
  std::vector<Flow> edge_flow;
};

/// Exact integral max s-t flow over the purchased edges. Each undirected edge
/// carries at most its capacity, in one direction.
MaxFlowResult max_flow(const MultiGraph& g, std::span<const EdgeIndex> purchased);
/// Same, with every edge purchased.
MaxFlowResult max_flow(const MultiGraph& g);

/// Net inflow minus outflow per vertex; entries sum to zero.
class ResidueAssignment {
 public:
  explicit ResidueAssignment(VertexId vertex_count) : residues_(static_cast<std::size_t>(vertex_count), 0) {}
  ResidueAssignment(VertexId vertex_count, const std::map<VertexId, Flow>& values);

  Flow operator[](VertexId v) const { return residues_[static_cast<std::size_t>(v)]; }
  Flow& operator[](VertexId v) { return residues_[static_cast<std::size_t>(v)]; }
  VertexId vertex_count() const { return static_cast<VertexId>(residues_.size()); }
  bool balanced() const;

 private:
  std::vector<Flow> residues_;
};

/// True iff the purchased subgraph admits an integral circulation with the
/// given residues. Throws std::invalid_argument if residues do not sum to 0.
bool circulation_feasible(const MultiGraph& g, std::span<const EdgeIndex> purchased,
                          const ResidueAssignment& residues);

/// Demand above the max flow of the whole graph.
class InfeasibleDemand : public std::runtime_error {
 public:
  InfeasibleDemand(Flow demand, Flow max_flow);
  Flow demand() const { return demand_; }
  Flow max_flow() const { return max_flow_; }

 private:
  Flow demand_, max_flow_;
};

struct Solution {
  std::vector<EdgeIndex> purchased;  // ascending
  Cost total_cost = 0;
  Flow achieved_flow = 0;
};

/// Normalizes `purchased`, recomputes cost and exact max flow.
Solution make_solution(const MultiGraph& g, std::vector<EdgeIndex> purchased);

/// Resolves edge ids to indices; throws std::invalid_argument on an unknown id.
std::vector<EdgeIndex> resolve_edge_ids(const MultiGraph& g, std::span<const std::string> ids);

struct VerificationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  Cost cost = 0;
  Flow flow = 0;
  bool passed() const;
};

/// Recomputes cost and max flow of `solution` and checks them against the
/// instance's objective and against the solution's own claims.
VerificationReport verify_solution(const ProblemInstance& instance, const Solution& solution);

}  // namespace spnd
