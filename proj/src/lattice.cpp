#include "spnd/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spnd {

namespace {
// Floor / ceil division for a positive divisor.
Flow floor_div(Flow x, Flow d) { return x >= 0 ? x / d : -((-x + d - 1) / d); }
Flow ceil_div(Flow x, Flow d) { return -floor_div(-x, d); }
}  // namespace

std::vector<Flow> lattice_span(const std::vector<Flow>& basis, std::int64_t coefficient_bound, Flow limit) {
  if (coefficient_bound < 0) throw std::invalid_argument("negative coefficient bound");
  for (Flow d : basis)
    if (d < 0) throw std::invalid_argument("lattice basis must be nonnegative");

  std::vector<Flow> order(basis);
  std::sort(order.begin(), order.end(), std::greater<>());
  // Partial sums may leave [-limit, limit] as long as the remaining basis
  // elements can still bring them back.
  std::vector<Flow> reach_after(order.size() + 1, 0);
  for (std::size_t i = order.size(); i-- > 0;)
    reach_after[i] = reach_after[i + 1] + coefficient_bound * order[i];

  std::vector<Flow> current{0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Flow d = order[i];
    if (d == 0) continue;
    const Flow lim = limit + reach_after[i + 1];
    std::vector<Flow> next;
    for (Flow x : current) {
      Flow lo = std::max<Flow>(-coefficient_bound, ceil_div(-lim - x, d));
      Flow hi = std::min<Flow>(coefficient_bound, floor_div(lim - x, d));
      for (Flow alpha = lo; alpha <= hi; ++alpha) next.push_back(x + alpha * d);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current = std::move(next);
  }
  std::erase_if(current, [&](Flow v) { return v < -limit || v > limit; });
  return current;
}

std::vector<Flow> lattice_residues(const LatticeSpec& spec, std::size_t edge_count, Flow f_bound) {
  auto m = static_cast<std::int64_t>(edge_count);
  return lattice_span(spec.basis, m * m * spec.bound, f_bound);
}

std::vector<std::string> validate_lattice(const LatticeSpec& spec, const MultiGraph& g) {
  if (spec.basis.empty()) throw std::invalid_argument("empty lattice basis");
  if (spec.bound < 1) throw std::invalid_argument("lattice bound K must be positive");
  Flow max_cap = 0;
  for (const auto& e : g.edges()) max_cap = std::max(max_cap, e.capacity);
  auto representable = lattice_span(spec.basis, spec.bound, max_cap);
  for (const auto& e : g.edges())
    if (!std::binary_search(representable.begin(), representable.end(), e.capacity))
      throw std::invalid_argument("capacity " + std::to_string(e.capacity) + " of edge " + e.id +
                                  " is not in the lattice");

  std::vector<std::string> warnings;
  double m = static_cast<double>(g.edge_count());
  double bound = std::pow(2 * m * m * static_cast<double>(spec.bound) + 1, static_cast<double>(spec.basis.size()));
  if (bound > spec.state_budget)
    warnings.push_back("lattice residue bound (2m^2K+1)^k = " + std::to_string(bound) + " exceeds the state budget " +
                       std::to_string(spec.state_budget));
  return warnings;
}

Solution solve_lattice(const ProblemInstance& instance, const LatticeSpec& spec, LatticeStats* stats) {
  if (!instance.upgrades.empty()) throw std::invalid_argument("instance has upgrade menus; expand them first");
  const auto& g = instance.graph;
  auto warnings = validate_lattice(spec, g);
  const Flow F = upper_bound_flow(instance);
  auto residues = lattice_residues(spec, g.edge_count(), F);
  if (stats) {
    stats->f = F;
    stats->residue_count = residues.size();
    stats->warnings = warnings;
  }

  const bool capndp = instance.objective.kind == ProblemKind::CapNdp;
  if (capndp && instance.demand() > F) throw InfeasibleDemand(instance.demand(), F);
  if (F == 0) return make_solution(g, {});

  auto tree = decompose(g);
  std::vector<Flow> flows;
  for (Flow v : residues)
    if (v >= 0) flows.push_back(v);
  auto table = build_table(tree, g, TableOptions{.f_bound = F, .residue_values = std::move(residues)});
  if (stats) stats->entries = table.entry_count();

  // The max flow of any edge set is a cut value, hence a lattice value; so
  // only lattice flow values need to be queried.
  std::optional<QueryResult> best;
  std::optional<Flow> best_v;
  for (Flow v : flows) {
    if (capndp && v < instance.demand()) continue;
    auto q = dp_query(table, v);
    if (!q.feasible) continue;
    if (capndp) {
      if (!best || q.cost < best->cost) {
        best = std::move(q);
        best_v = v;
      }
    } else if (q.cost <= instance.budget()) {
      best = std::move(q);  // flows ascend
      best_v = v;
    }
  }
  if (!best) {
    if (capndp) throw std::logic_error("lattice DP found no edge set for a feasible demand");
    return make_solution(g, {});
  }
  return make_solution(g, std::move(best->edges));
}

}  // namespace spnd
