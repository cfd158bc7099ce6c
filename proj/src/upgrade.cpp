#include "spnd/upgrade.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

namespace spnd {

std::size_t Gadget::edge_count() const { return choice_edge.size() + 2 * guards.size(); }

std::vector<EdgeIndex> Gadget::guards_for(std::size_t i) const {
  // Choices 0 and 1 sit inside every level; choice i >= 2 inside levels i-1 and up.
  std::vector<EdgeIndex> out;
  for (std::size_t level = i < 2 ? 0 : i - 1; level < guards.size(); ++level) {
    out.push_back(guards[level].first);
    out.push_back(guards[level].second);
  }
  return out;
}

Expansion expand_upgrades(const ProblemInstance& instance) {
  const auto& g = instance.graph;
  Expansion out;
  auto& map = out.map;
  map.plain_edges = g.edge_count();
  map.original_vertices = g.vertex_count();

  std::vector<EdgeRecord> edges = g.edges();
  std::unordered_set<std::string> taken;
  for (const auto& e : edges) taken.insert(e.id);
  for (const auto& up : instance.upgrades) taken.insert(up.id);
  VertexId next_vertex = g.vertex_count();

  auto add_edge = [&](const std::string& id, VertexId a, VertexId b, Cost c, Flow u) {
    if (!taken.insert(id).second) throw std::invalid_argument("gadget edge id " + id + " collides with an existing id");
    edges.push_back(EdgeRecord{id, a, b, c, u});
    return edges.size() - 1;
  };

  for (const auto& up : instance.upgrades) {
    if (up.choices.empty()) throw std::invalid_argument("empty upgrade menu on " + up.id);
    Gadget gad;
    gad.id = up.id;
    gad.u = up.u;
    gad.v = up.v;

    std::vector<std::size_t> order(up.choices.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const auto &cx = up.choices[x], &cy = up.choices[y];
      return std::pair(cx.capacity, cx.cost) < std::pair(cy.capacity, cy.cost);
    });
    for (std::size_t pos : order) {
      const auto& ch = up.choices[pos];
      if (!gad.choices.empty() && gad.choices.back().capacity == ch.capacity) {
        map.warnings.push_back("upedge " + up.id + ": choice " + std::to_string(pos + 1) + " (cost " +
                               std::to_string(ch.cost) + ", capacity " + std::to_string(ch.capacity) +
                               ") is dominated and was dropped");
        continue;
      }
      gad.choices.push_back(ch);
      gad.input_index.push_back(pos + 1);
    }

    const std::size_t k = gad.choices.size();
    gad.choice_edge.resize(k);
    auto choice_id = [&](std::size_t i) { return up.id + ".c" + std::to_string(gad.input_index[i]); };
    if (k == 1) {
      gad.choice_edge[0] = add_edge(choice_id(0), up.u, up.v, gad.choices[0].cost, gad.choices[0].capacity);
      map.gadgets.push_back(std::move(gad));
      continue;
    }

    // Build from the outside in: level j's guards connect (x, y) to a fresh
    // inner pair carrying choice j in parallel with the deeper levels.
    gad.guards.resize(k - 1);
    VertexId x = up.u, y = up.v;
    for (std::size_t level = k; level >= 2; --level) {
      const Flow cap = gad.choices[level - 1].capacity;
      VertexId ix = next_vertex++, iy = next_vertex++;
      auto tag = up.id + ".g" + std::to_string(level);
      gad.guards[level - 2] = {add_edge(tag + "a", x, ix, 0, cap), add_edge(tag + "b", iy, y, 0, cap)};
      if (level == 2) {
        for (std::size_t i = 0; i < 2; ++i)
          gad.choice_edge[i] = add_edge(choice_id(i), ix, iy, gad.choices[i].cost, gad.choices[i].capacity);
      } else {
        gad.choice_edge[level - 1] =
            add_edge(choice_id(level - 1), ix, iy, gad.choices[level - 1].cost, gad.choices[level - 1].capacity);
      }
      x = ix;
      y = iy;
    }
    map.gadgets.push_back(std::move(gad));
  }

  out.instance.graph = MultiGraph(next_vertex, std::move(edges), g.source(), g.sink(), g.declared_terminals());
  out.instance.objective = instance.objective;
  return out;
}

MappedSolution map_back(const ProblemInstance& expanded, const GadgetMap& map, const Solution& solution) {
  const auto& g = expanded.graph;
  std::set<EdgeIndex> bought(solution.purchased.begin(), solution.purchased.end());
  MappedSolution out;

  std::vector<EdgeRecord> edges;
  std::vector<EdgeIndex> chosen;
  for (EdgeIndex e = 0; e < map.plain_edges; ++e) {
    edges.push_back(g.edge(e));
    if (bought.count(e)) chosen.push_back(e);
  }
  for (const auto& gad : map.gadgets) {
    GadgetDecision d;
    d.id = gad.id;
    for (std::size_t i = gad.choices.size(); i-- > 0;) {
      if (!bought.count(gad.choice_edge[i])) continue;
      bool added = false;
      for (EdgeIndex g_edge : gad.guards_for(i)) added |= bought.insert(g_edge).second;
      if (added)
        out.warnings.push_back("upedge " + gad.id + ": choice " + std::to_string(gad.input_index[i]) +
                               " was bought without its guards; free guards added");
      if (d.choice == 0) {
        d.choice = gad.input_index[i];
        d.value = gad.choices[i];
      }
    }
    if (d.choice != 0) {
      edges.push_back(EdgeRecord{gad.id, gad.u, gad.v, d.value.cost, d.value.capacity});
      chosen.push_back(edges.size() - 1);
    }
    out.decisions.push_back(std::move(d));
  }

  MultiGraph interpreted(map.original_vertices, std::move(edges), g.source(), g.sink());
  auto sol = make_solution(interpreted, std::move(chosen));
  out.cost = sol.total_cost;
  out.flow = sol.achieved_flow;
  out.normalized = make_solution(g, std::vector<EdgeIndex>(bought.begin(), bought.end()));
  const auto& expanded_eval = out.normalized;
  if (out.cost > expanded_eval.total_cost || out.flow < expanded_eval.achieved_flow)
    throw std::logic_error("gadget interpretation is worse than the expanded solution");
  if (out.cost < expanded_eval.total_cost)
    out.warnings.push_back("expanded solution bought edges that carry no flow; interpreted cost is lower");
  return out;
}

}  // namespace spnd
