#include "spnd/oracle.hpp"

#include <bit>

namespace spnd {

InstanceTooLarge::InstanceTooLarge(std::size_t edges)
    : std::invalid_argument("instance too large for exhaustive search: " + std::to_string(edges) + " edges (limit " +
                            std::to_string(kOracleMaxEdges) + ")") {}

OracleTable::OracleTable(const MultiGraph& g) : graph_(g) {
  const std::size_t m = g.edge_count();
  if (m > kOracleMaxEdges) throw InstanceTooLarge(m);
  const std::size_t count = std::size_t{1} << m;
  cost_.assign(count, 0);
  flow_.assign(count, 0);

  // Gray-code walk: each step toggles one edge, so the cost is updated in O(1).
  Cost running = 0;
  std::vector<EdgeIndex> chosen;
  for (std::size_t step = 0; step < count; ++step) {
    std::uint32_t mask = static_cast<std::uint32_t>(step ^ (step >> 1));
    if (step > 0) {
      std::uint32_t prev = static_cast<std::uint32_t>((step - 1) ^ ((step - 1) >> 1));
      auto bit = static_cast<EdgeIndex>(std::countr_zero(mask ^ prev));
      running += (mask >> bit & 1u) ? g.edge(bit).cost : -g.edge(bit).cost;
    }
    chosen.clear();
    for (EdgeIndex e = 0; e < m; ++e)
      if (mask >> e & 1u) chosen.push_back(e);
    cost_[mask] = running;
    flow_[mask] = spnd::max_flow(g, chosen).value;
  }
}

bool OracleTable::ids_before(std::uint32_t x, std::uint32_t y) const {
  auto ids = [&](std::uint32_t mask) {
    std::vector<EdgeIndex> edges;
    for (EdgeIndex e = 0; e < graph_.edge_count(); ++e)
      if (mask >> e & 1u) edges.push_back(e);
    return sorted_ids(graph_, edges);
  };
  return ids(x) < ids(y);
}

Solution OracleTable::to_solution(std::uint32_t mask) const {
  std::vector<EdgeIndex> edges;
  for (EdgeIndex e = 0; e < graph_.edge_count(); ++e)
    if (mask >> e & 1u) edges.push_back(e);
  return Solution{std::move(edges), cost_[mask], flow_[mask]};
}

Solution OracleTable::capndp(Flow demand) const {
  if (max_flow() < demand) throw InfeasibleDemand(demand, max_flow());
  std::uint32_t best = static_cast<std::uint32_t>(cost_.size() - 1);
  for (std::uint32_t mask = 0; mask < cost_.size(); ++mask) {
    if (flow_[mask] < demand) continue;
    if (cost_[mask] != cost_[best]) {
      if (cost_[mask] < cost_[best]) best = mask;
      continue;
    }
    int pm = std::popcount(mask), pb = std::popcount(best);
    if (pm < pb || (pm == pb && ids_before(mask, best))) best = mask;
  }
  return to_solution(best);
}

Solution OracleTable::bcmfp(Cost budget) const {
  std::uint32_t best = 0;
  if (budget < 0) throw std::invalid_argument("negative budget");
  for (std::uint32_t mask = 1; mask < cost_.size(); ++mask) {
    if (cost_[mask] > budget) continue;
    if (flow_[mask] != flow_[best]) {
      if (flow_[mask] > flow_[best]) best = mask;
      continue;
    }
    if (cost_[mask] != cost_[best]) {
      if (cost_[mask] < cost_[best]) best = mask;
      continue;
    }
    int pm = std::popcount(mask), pb = std::popcount(best);
    if (pm < pb || (pm == pb && ids_before(mask, best))) best = mask;
  }
  return to_solution(best);
}

Solution oracle_capndp(const ProblemInstance& instance) {
  if (instance.graph.edge_count() > kOracleMaxEdges) throw InstanceTooLarge(instance.graph.edge_count());
  return OracleTable(instance.graph).capndp(instance.demand());
}

Solution oracle_bcmfp(const ProblemInstance& instance) {
  if (instance.graph.edge_count() > kOracleMaxEdges) throw InstanceTooLarge(instance.graph.edge_count());
  return OracleTable(instance.graph).bcmfp(instance.budget());
}

}  // namespace spnd
