#include "spnd/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace spnd {

InfeasibleDemand::InfeasibleDemand(Flow demand, Flow max_flow)
    : std::runtime_error("demand " + std::to_string(demand) + " exceeds max flow " + std::to_string(max_flow)),
      demand_(demand),
      max_flow_(max_flow) {}

namespace {

// Dinic's algorithm on a residual network. Undirected edges are a single arc
// pair where each arc is the other's reverse and both start at the capacity.
class Dinic {
 public:
  explicit Dinic(int node_count) : head_(static_cast<std::size_t>(node_count), -1) {}

  int add_arc(int from, int to, Flow cap_forward, Flow cap_backward) {
    int id = static_cast<int>(to_.size());
    push(from, to, cap_forward);
    push(to, from, cap_backward);
    return id;
  }

  Flow run(int s, int t) {
    Flow total = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      while (Flow pushed = dfs(s, t, std::numeric_limits<Flow>::max())) total += pushed;
    }
    return total;
  }

  // Flow moved along arc `id` relative to its initial capacity.
  Flow moved(int id, Flow initial) const { return initial - cap_[static_cast<std::size_t>(id)]; }

 private:
  void push(int from, int to, Flow cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[static_cast<std::size_t>(from)]);
    head_[static_cast<std::size_t>(from)] = static_cast<int>(to_.size()) - 1;
  }

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a = head_[static_cast<std::size_t>(v)]; a != -1; a = next_[static_cast<std::size_t>(a)]) {
        int w = to_[static_cast<std::size_t>(a)];
        if (cap_[static_cast<std::size_t>(a)] > 0 && level_[static_cast<std::size_t>(w)] < 0) {
          level_[static_cast<std::size_t>(w)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(w);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  Flow dfs(int v, int t, Flow limit) {
    if (v == t) return limit;
    for (int& a = iter_[static_cast<std::size_t>(v)]; a != -1; a = next_[static_cast<std::size_t>(a)]) {
      auto ai = static_cast<std::size_t>(a);
      int w = to_[ai];
      if (cap_[ai] <= 0 || level_[static_cast<std::size_t>(w)] != level_[static_cast<std::size_t>(v)] + 1)
        continue;
      if (Flow got = dfs(w, t, std::min(limit, cap_[ai])); got > 0) {
        cap_[ai] -= got;
        cap_[ai ^ 1] += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<int> head_, iter_, level_;
  std::vector<int> to_, next_;
  std::vector<Flow> cap_;
};

}  // namespace

MaxFlowResult max_flow(const MultiGraph& g, std::span<const EdgeIndex> purchased) {
  Dinic net(g.vertex_count());
  std::vector<int> arc(purchased.size());
  for (std::size_t i = 0; i < purchased.size(); ++i) {
    const auto& e = g.edge(purchased[i]);
    arc[i] = net.add_arc(e.u, e.v, e.capacity, e.capacity);
  }
  MaxFlowResult result;
  result.value = net.run(g.source(), g.sink());
  result.edge_flow.assign(g.edge_count(), 0);
  for (std::size_t i = 0; i < purchased.size(); ++i)
    result.edge_flow[purchased[i]] += net.moved(arc[i], g.edge(purchased[i]).capacity);
  return result;
}

MaxFlowResult max_flow(const MultiGraph& g) {
  std::vector<EdgeIndex> all(g.edge_count());
  std::iota(all.begin(), all.end(), EdgeIndex{0});
  return max_flow(g, all);
}

ResidueAssignment::ResidueAssignment(VertexId vertex_count, const std::map<VertexId, Flow>& values)
    : ResidueAssignment(vertex_count) {
  for (auto [v, r] : values) {
    if (v < 0 || v >= vertex_count) throw std::invalid_argument("residue vertex out of range");
    (*this)[v] = r;
  }
}

bool ResidueAssignment::balanced() const { return std::reduce(residues_.begin(), residues_.end(), Flow{0}) == 0; }

bool circulation_feasible(const MultiGraph& g, std::span<const EdgeIndex> purchased,
                          const ResidueAssignment& residues) {
  if (residues.vertex_count() != g.vertex_count()) throw std::invalid_argument("residue size mismatch");
  if (!residues.balanced()) throw std::invalid_argument("residues do not sum to zero");
  const int n = g.vertex_count();
  const int super_source = n, super_sink = n + 1;
  Dinic net(n + 2);
  for (auto ei : purchased) {
    const auto& e = g.edge(ei);
    net.add_arc(e.u, e.v, e.capacity, e.capacity);
  }
  Flow required = 0;
  for (VertexId v = 0; v < n; ++v) {
    // Negative residue: v sends out more than it receives.
    if (residues[v] < 0) net.add_arc(super_source, v, -residues[v], 0);
    if (residues[v] > 0) {
      net.add_arc(v, super_sink, residues[v], 0);
      required += residues[v];
    }
  }
  return net.run(super_source, super_sink) == required;
}

Solution make_solution(const MultiGraph& g, std::vector<EdgeIndex> purchased) {
  std::sort(purchased.begin(), purchased.end());
  purchased.erase(std::unique(purchased.begin(), purchased.end()), purchased.end());
  Solution s;
  for (auto e : purchased) s.total_cost += g.edge(e).cost;
  s.achieved_flow = max_flow(g, purchased).value;
  s.purchased = std::move(purchased);
  return s;
}

std::vector<EdgeIndex> resolve_edge_ids(const MultiGraph& g, std::span<const std::string> ids) {
  std::vector<EdgeIndex> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto e = g.find_edge(id);
    if (!e) throw std::invalid_argument("unknown edge id " + id);
    out.push_back(*e);
  }
  return out;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

VerificationReport verify_solution(const ProblemInstance& instance, const Solution& solution) {
  const auto& g = instance.graph;
  for (auto e : solution.purchased)
    if (e >= g.edge_count()) throw std::invalid_argument("unknown edge index " + std::to_string(e));

  auto recomputed = make_solution(g, solution.purchased);
  VerificationReport report;
  report.cost = recomputed.total_cost;
  report.flow = recomputed.achieved_flow;

  report.checks.push_back({"cost", recomputed.total_cost == solution.total_cost,
                           "claimed " + std::to_string(solution.total_cost) + ", recomputed " +
                               std::to_string(recomputed.total_cost)});
  report.checks.push_back({"flow", recomputed.achieved_flow == solution.achieved_flow,
                           "claimed " + std::to_string(solution.achieved_flow) + ", recomputed " +
                               std::to_string(recomputed.achieved_flow)});
  if (instance.objective.kind == ProblemKind::Bcmfp) {
    auto b = instance.objective.value;
    report.checks.push_back({"budget", recomputed.total_cost <= b,
                             "cost " + std::to_string(recomputed.total_cost) +
                                 (recomputed.total_cost <= b ? " <= " : " > ") + "budget " + std::to_string(b)});
  } else {
    auto d = instance.objective.value;
    report.checks.push_back({"demand", recomputed.achieved_flow >= d,
                             "flow " + std::to_string(recomputed.achieved_flow) +
                                 (recomputed.achieved_flow >= d ? " >= " : " < ") + "demand " + std::to_string(d)});
  }
  return report;
}

}  // namespace spnd
