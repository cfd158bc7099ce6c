#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spnd/graph.hpp"
#include "spnd/max_flow.hpp"

namespace spnd {

inline constexpr std::size_t kOracleMaxEdges = 20;

class InstanceTooLarge : public std::invalid_argument {
 public:
  explicit InstanceTooLarge(std::size_t edges);
};

/// Cost and max flow of every edge subset, indexed by bitmask.
class OracleTable {
 public:
  /// Throws InstanceTooLarge above kOracleMaxEdges edges.
  explicit OracleTable(const MultiGraph& g);

  const MultiGraph& graph() const { return graph_; }
  std::size_t subset_count() const { return cost_.size(); }
  Cost cost(std::uint32_t mask) const { return cost_[mask]; }
  Flow flow(std::uint32_t mask) const { return flow_[mask]; }
  Flow max_flow() const { return flow_.back(); }

  /// Cheapest subset reaching `demand`; ties: fewer edges, then sorted ids.
  /// Throws InfeasibleDemand if the whole graph cannot carry `demand`.
  Solution capndp(Flow demand) const;
  /// Largest flow within `budget`; ties: lower cost, fewer edges, sorted ids.
  Solution bcmfp(Cost budget) const;

 private:
  bool ids_before(std::uint32_t x, std::uint32_t y) const;
  Solution to_solution(std::uint32_t mask) const;

  MultiGraph graph_;
  std::vector<Cost> cost_;
  std::vector<Flow> flow_;
};

Solution oracle_capndp(const ProblemInstance& instance);
Solution oracle_bcmfp(const ProblemInstance& instance);

}  // namespace spnd
