#include "spnd/dp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace spnd {

// ---------------------------------------------------------------------------
// Small value types

ResidueTuple ResidueTuple::negated() const {
  ResidueTuple r;
  r.a = -a;
  r.b = -b;
  if (s) r.s = -*s;
  if (t) r.t = -*t;
  return r;
}

std::string ResidueTuple::to_string() const {
  std::ostringstream out;
  out << '(' << a;
  if (s) out << ", s=" << *s;
  if (t) out << ", t=" << *t;
  out << ", " << b << ')';
  return out.str();
}

ResidueDomain ResidueDomain::interval(Flow lo, Flow hi) {
  ResidueDomain d;
  d.contiguous_ = true;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

ResidueDomain ResidueDomain::of_values(std::vector<Flow> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  ResidueDomain d;
  d.contiguous_ = false;
  d.values_ = std::move(values);
  return d;
}

std::ptrdiff_t ResidueDomain::index_of(Flow v) const {
  if (contiguous_) return (v < lo_ || v > hi_) ? -1 : static_cast<std::ptrdiff_t>(v - lo_);
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  return (it == values_.end() || *it != v) ? -1 : it - values_.begin();
}

std::string_view to_string(DpCase c) {
  static constexpr std::array<std::string_view, kDpCaseCount> names{
      "leaf",  "1.1",     "1.2",     "2.1",        "2.1~st",  "2.2",     "2.2~st",  "2.2~lr", "2.2~st~lr",
      "2.3",   "2.3~st",  "2.3~lr",  "2.3~st~lr",  "3.1",     "3.1~st",  "3.1~lr",  "3.1~st~lr",
      "3.2",   "3.2~st",  "3.3",     "3.3~lr",     "3.4",     "3.4~lr",  "3.5",     "3.5~st"};
  return names[static_cast<std::size_t>(c)];
}

CaseCounters& CaseCounters::operator+=(const CaseCounters& other) {
  for (std::size_t i = 0; i < kDpCaseCount; ++i) counts[i] += other.counts[i];
  return *this;
}

std::vector<DpCase> CaseCounters::missing() const {
  std::vector<DpCase> out;
  for (std::size_t i = 0; i < kDpCaseCount; ++i)
    if (counts[i] == 0) out.push_back(static_cast<DpCase>(i));
  return out;
}

DpCase classify(const DecompTree& tree, NodeId id) {
  const auto& n = tree.node(id);
  if (n.kind == NodeKind::Leaf) return DpCase::Leaf;
  const auto& l = tree.node(n.left);
  enum class Where { Join, Left, Right };
  auto where = [&](bool in_left, VertexId v) {
    if (n.kind == NodeKind::Series && n.join == v) return Where::Join;
    return in_left ? Where::Left : Where::Right;
  };
  const int specials = (n.has_s ? 1 : 0) + (n.has_t ? 1 : 0);

  if (n.kind == NodeKind::Series) {
    if (specials == 0) return DpCase::C1_1;
    if (specials == 1) {
      bool is_t = n.has_t;
      Where w = is_t ? where(l.has_t, tree.sink()) : where(l.has_s, tree.source());
      switch (w) {
        case Where::Join: return is_t ? DpCase::C2_1_st : DpCase::C2_1;
        case Where::Left: return is_t ? DpCase::C2_2_st : DpCase::C2_2;
        case Where::Right: return is_t ? DpCase::C2_2_st_lr : DpCase::C2_2_lr;
      }
    }
    Where ws = where(l.has_s, tree.source());
    Where wt = where(l.has_t, tree.sink());
    if (ws == Where::Left && wt == Where::Join) return DpCase::C3_1;
    if (ws == Where::Join && wt == Where::Left) return DpCase::C3_1_st;
    if (ws == Where::Right && wt == Where::Join) return DpCase::C3_1_lr;
    if (ws == Where::Join && wt == Where::Right) return DpCase::C3_1_st_lr;
    if (ws == Where::Left && wt == Where::Right) return DpCase::C3_2;
    if (ws == Where::Right && wt == Where::Left) return DpCase::C3_2_st;
    if (ws == Where::Right && wt == Where::Right) return DpCase::C3_3;
    return DpCase::C3_3_lr;
  }

  if (specials == 0) return DpCase::C1_2;
  if (specials == 1) {
    bool is_t = n.has_t;
    bool left = is_t ? l.has_t : l.has_s;
    if (left) return is_t ? DpCase::C2_3_st : DpCase::C2_3;
    return is_t ? DpCase::C2_3_st_lr : DpCase::C2_3_lr;
  }
  if (l.has_s && l.has_t) return DpCase::C3_4_lr;
  if (!l.has_s && !l.has_t) return DpCase::C3_4;
  return l.has_s ? DpCase::C3_5 : DpCase::C3_5_st;
}

// ---------------------------------------------------------------------------
// Table internals

namespace {
const ResidueDomain& zero_domain() {
  static const ResidueDomain d = ResidueDomain::interval(0, 0);
  return d;
}
}  // namespace

const ResidueDomain& DPTable::s_domain(NodeId n) const {
  if (!tree_.node(n).has_s) return zero_domain();
  return pinned_ ? pinned_s_ : base_;
}

const ResidueDomain& DPTable::t_domain(NodeId n) const {
  if (!tree_.node(n).has_t) return zero_domain();
  return pinned_ ? pinned_t_ : base_;
}

std::ptrdiff_t DPTable::slot(NodeId node, const Raw& r) const {
  if (!base_.contains(r.b)) return -1;
  auto ia = base_.index_of(r.a);
  if (ia < 0) return -1;
  const auto& sd = s_domain(node);
  const auto& td = t_domain(node);
  auto is = sd.index_of(r.s);
  auto it = td.index_of(r.t);
  if (is < 0 || it < 0) return -1;
  return (ia * static_cast<std::ptrdiff_t>(sd.size()) + is) * static_cast<std::ptrdiff_t>(td.size()) + it;
}

Cost DPTable::lookup(NodeId node, const Raw& r) const {
  auto i = slot(node, r);
  return i < 0 ? infinity_ : cost_[static_cast<std::size_t>(node)][static_cast<std::size_t>(i)];
}

DPTable::Raw DPTable::raw(NodeId node, const ResidueTuple& tuple) const {
  const auto& n = tree_.node(node);
  if (tuple.s.has_value() != n.has_s || tuple.t.has_value() != n.has_t)
    throw std::invalid_argument("tuple " + tuple.to_string() + " does not match the node's interior source/sink");
  if (!tuple.balanced()) throw std::invalid_argument("tuple " + tuple.to_string() + " does not sum to zero");
  return {tuple.a, tuple.s.value_or(0), tuple.t.value_or(0), tuple.b};
}

ResidueTuple DPTable::cook(NodeId node, const Raw& r) const {
  const auto& n = tree_.node(node);
  ResidueTuple t;
  t.a = r.a;
  t.b = r.b;
  if (n.has_s) t.s = r.s;
  if (n.has_t) t.t = r.t;
  return t;
}

// Series node (a, b) with join c: left child (a, c), right child (c, b).
// The child hosting an interior special receives its residue; the residue of
// c in each child is forced by that child's zero sum.
DPTable::Raw DPTable::left_of_series(NodeId node, const Raw& r) const {
  const auto& l = tree_.node(tree_.node(node).left);
  Raw c{r.a, l.has_s ? r.s : 0, l.has_t ? r.t : 0, 0};
  c.b = -(c.a + c.s + c.t);
  return c;
}

DPTable::Raw DPTable::right_of_series(NodeId node, const Raw& r) const {
  const auto& rt = tree_.node(tree_.node(node).right);
  Raw c{0, rt.has_s ? r.s : 0, rt.has_t ? r.t : 0, r.b};
  c.a = -(c.b + c.s + c.t);
  return c;
}

// Parallel node: `split` units of a's residue go to the left child; the left
// child's b residue follows from its zero sum and the right child takes the rest.
std::pair<DPTable::Raw, DPTable::Raw> DPTable::parallel_children(NodeId node, const Raw& r, Flow split) const {
  const auto& n = tree_.node(node);
  const auto& l = tree_.node(n.left);
  const auto& rt = tree_.node(n.right);
  Raw left{split, l.has_s ? r.s : 0, l.has_t ? r.t : 0, 0};
  left.b = -(left.a + left.s + left.t);
  Raw right{r.a - split, rt.has_s ? r.s : 0, rt.has_t ? r.t : 0, r.b - left.b};
  return {left, right};
}

Cost DPTable::series_cost(NodeId node, const Raw& r) const {
  const auto& n = tree_.node(node);
  Cost left = lookup(n.left, left_of_series(node, r));
  if (left >= infinity_) return infinity_;
  return add(left, lookup(n.right, right_of_series(node, r)));
}

// Minimum over splits; ties prefer the split of smallest magnitude, then the
// smaller value, so the empty circulation reconstructs to the empty set.
std::pair<Cost, Flow> DPTable::parallel_best(NodeId node, const Raw& r) const {
  const auto& n = tree_.node(node);
  Cost best = infinity_;
  Flow best_split = 0;
  for (std::size_t i = 0; i < base_.size(); ++i) {
    Flow x = base_.value(i);
    auto [lr, rr] = parallel_children(node, r, x);
    Cost lc = lookup(n.left, lr);
    if (lc >= infinity_ || lc > best) continue;
    Cost total = add(lc, lookup(n.right, rr));
    if (total >= infinity_) continue;
    bool better = total < best || (total == best && (std::abs(x) < std::abs(best_split) ||
                                                     (std::abs(x) == std::abs(best_split) && x < best_split)));
    if (better) {
      best = total;
      best_split = x;
    }
  }
  return {best, best_split};
}

Cost DPTable::cost(NodeId node, const ResidueTuple& tuple) const { return lookup(node, raw(node, tuple)); }

DPEntry DPTable::entry(NodeId node, const ResidueTuple& tuple) const {
  Raw r = raw(node, tuple);
  auto i = slot(node, r);
  const auto& n = tree_.node(node);
  DPEntry e;
  e.cost = i < 0 ? infinity_ : cost_[static_cast<std::size_t>(node)][static_cast<std::size_t>(i)];
  switch (n.kind) {
    case NodeKind::Leaf:
      e.choice = LeafChoice{e.cost < infinity_ && r.a != 0};
      break;
    case NodeKind::Series:
      e.choice = SeriesChoice{cook(n.left, left_of_series(node, r)), cook(n.right, right_of_series(node, r))};
      break;
    case NodeKind::Parallel: {
      Flow split = i < 0 ? 0 : split_[static_cast<std::size_t>(node)][static_cast<std::size_t>(i)];
      auto [lr, rr] = parallel_children(node, r, split);
      e.choice = ParallelChoice{split, cook(n.left, lr), cook(n.right, rr)};
      break;
    }
  }
  return e;
}

std::vector<EdgeIndex> DPTable::reconstruct(NodeId node, const ResidueTuple& tuple) const {
  if (cost(node, tuple) >= infinity_)
    throw std::invalid_argument("cannot reconstruct an infeasible entry " + tuple.to_string());
  std::vector<EdgeIndex> edges;
  std::vector<std::pair<NodeId, Raw>> stack{{node, raw(node, tuple)}};
  while (!stack.empty()) {
    auto [id, r] = stack.back();
    stack.pop_back();
    const auto& n = tree_.node(id);
    switch (n.kind) {
      case NodeKind::Leaf:
        if (r.a != 0) edges.push_back(n.edge);
        break;
      case NodeKind::Series:
        stack.push_back({n.right, right_of_series(id, r)});
        stack.push_back({n.left, left_of_series(id, r)});
        break;
      case NodeKind::Parallel: {
        auto i = static_cast<std::size_t>(slot(id, r));
        auto [lr, rr] = parallel_children(id, r, split_[static_cast<std::size_t>(id)][i]);
        stack.push_back({n.right, rr});
        stack.push_back({n.left, lr});
        break;
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::size_t DPTable::entry_count() const {
  std::size_t total = 0;
  for (const auto& c : cost_) total += c.size();
  return total;
}

std::vector<ResidueTuple> DPTable::tuples(NodeId node) const {
  std::vector<ResidueTuple> out;
  const auto& sd = s_domain(node);
  const auto& td = t_domain(node);
  out.reserve(entry_count(node));
  for (std::size_t ia = 0; ia < base_.size(); ++ia)
    for (std::size_t is = 0; is < sd.size(); ++is)
      for (std::size_t it = 0; it < td.size(); ++it) {
        Raw r{base_.value(ia), sd.value(is), td.value(it), 0};
        r.b = -(r.a + r.s + r.t);
        if (base_.contains(r.b)) out.push_back(cook(node, r));
      }
  return out;
}

// ---------------------------------------------------------------------------
// Public operations

Flow upper_bound_flow(const ProblemInstance& instance) { return max_flow(instance.graph).value; }

Cost leaf_cost(const EdgeRecord& edge, const ResidueTuple& tuple, Cost infinity) {
  if (tuple.s || tuple.t) throw std::invalid_argument("leaf received a " + std::to_string(tuple.arity()) + "-tuple");
  if (!tuple.balanced()) throw std::invalid_argument("leaf tuple does not sum to zero");
  Flow r = tuple.a < 0 ? -tuple.a : tuple.a;
  if (r == 0) return 0;
  return r <= edge.capacity ? edge.cost : infinity;
}

DPEntry combine_series(const DPTable& table, NodeId node, const ResidueTuple& tuple) {
  if (table.tree().node(node).kind != NodeKind::Series) throw std::invalid_argument("not a series node");
  auto r = table.raw(node, tuple);
  const auto& n = table.tree().node(node);
  DPEntry e;
  e.cost = table.base_.contains(r.a) && table.base_.contains(r.b) ? table.series_cost(node, r) : table.infinity_;
  e.choice = SeriesChoice{table.cook(n.left, table.left_of_series(node, r)),
                          table.cook(n.right, table.right_of_series(node, r))};
  return e;
}

DPEntry combine_parallel(const DPTable& table, NodeId node, const ResidueTuple& tuple) {
  if (table.tree().node(node).kind != NodeKind::Parallel) throw std::invalid_argument("not a parallel node");
  auto r = table.raw(node, tuple);
  const auto& n = table.tree().node(node);
  auto [cost, split] = table.base_.contains(r.a) && table.base_.contains(r.b) ? table.parallel_best(node, r)
                                                                              : std::pair{table.infinity_, Flow{0}};
  auto [lr, rr] = table.parallel_children(node, r, split);
  return DPEntry{cost, ParallelChoice{split, table.cook(n.left, lr), table.cook(n.right, rr)}};
}

DPTable build_table(const DecompTree& tree, const MultiGraph& graph, TableOptions options) {
  if (options.f_bound < 0) throw std::invalid_argument("negative residue bound");
  if (tree.edges().size() != graph.edge_count()) throw std::invalid_argument("tree does not match graph");

  DPTable table;
  table.tree_ = tree;
  table.f_bound_ = options.f_bound;
  table.infinity_ = graph.total_cost() + 1;
  table.pinned_ = options.pinned_flow;
  const Flow F = options.f_bound;
  if (options.residue_values) {
    std::vector<Flow> vals;
    for (Flow v : *options.residue_values)
      if (v >= -F && v <= F) vals.push_back(v);
    table.base_ = ResidueDomain::of_values(std::move(vals));
  } else {
    table.base_ = ResidueDomain::interval(-F, F);
  }
  if (table.pinned_) {
    table.pinned_s_ = ResidueDomain::interval(-*table.pinned_, -*table.pinned_);
    table.pinned_t_ = ResidueDomain::interval(*table.pinned_, *table.pinned_);
  }
  if (options.capacities) {
    if (options.capacities->size() != graph.edge_count()) throw std::invalid_argument("capacity override size");
    table.capacities_ = *options.capacities;
  } else {
    for (const auto& e : graph.edges()) table.capacities_.push_back(e.capacity);
  }
  for (const auto& e : graph.edges()) table.edge_cost_.push_back(e.cost);

  const auto order = tree.postorder();
  std::size_t planned = 0;
  for (auto id : order) planned += table.base_.size() * table.s_domain(id).size() * table.t_domain(id).size();
  if (planned > options.max_entries)
    throw std::length_error("DP table would need " + std::to_string(planned) + " entries (limit " +
                            std::to_string(options.max_entries) + ")");

  table.cost_.resize(tree.size());
  table.split_.resize(tree.size());
  for (auto id : order) {
    const auto& n = tree.node(id);
    const auto& sd = table.s_domain(id);
    const auto& td = table.t_domain(id);
    const std::size_t size = table.base_.size() * sd.size() * td.size();
    auto& costs = table.cost_[static_cast<std::size_t>(id)];
    costs.assign(size, table.infinity_);
    if (n.kind == NodeKind::Parallel) table.split_[static_cast<std::size_t>(id)].assign(size, 0);
    table.cases_.add(classify(tree, id), size);

    std::size_t idx = 0;
    for (std::size_t ia = 0; ia < table.base_.size(); ++ia)
      for (std::size_t is = 0; is < sd.size(); ++is)
        for (std::size_t it = 0; it < td.size(); ++it, ++idx) {
          DPTable::Raw r{table.base_.value(ia), sd.value(is), td.value(it), 0};
          r.b = -(r.a + r.s + r.t);
          if (!table.base_.contains(r.b)) continue;
          switch (n.kind) {
            case NodeKind::Leaf: {
              Flow mag = r.a < 0 ? -r.a : r.a;
              costs[idx] = mag == 0 ? 0 : (mag <= table.capacities_[n.edge] ? table.edge_cost_[n.edge] : table.infinity_);
              break;
            }
            case NodeKind::Series:
              costs[idx] = table.series_cost(id, r);
              break;
            case NodeKind::Parallel: {
              auto [c, split] = table.parallel_best(id, r);
              costs[idx] = c;
              table.split_[static_cast<std::size_t>(id)][idx] = split;
              break;
            }
          }
        }
  }
  return table;
}

DPTable build_table(const DecompTree& tree, const ProblemInstance& instance, Flow f_bound) {
  return build_table(tree, instance.graph, TableOptions{.f_bound = f_bound});
}

ResidueTuple flow_tuple(const DecompTree& tree, Flow v) {
  const auto& root = tree.node(tree.root());
  ResidueTuple t;
  auto place = [&](VertexId x, Flow r, std::optional<Flow>& interior) {
    if (x == root.a) t.a += r;
    else if (x == root.b) t.b += r;
    else interior = r;
  };
  place(tree.source(), -v, t.s);
  place(tree.sink(), v, t.t);
  return t;
}

QueryResult dp_query(const DPTable& table, Flow v) {
  if (v < 0 || v > table.f_bound())
    throw std::out_of_range("flow value " + std::to_string(v) + " outside [0, " + std::to_string(table.f_bound()) + "]");
  const auto& tree = table.tree();
  auto tuple = flow_tuple(tree, v);
  QueryResult q;
  q.cost = table.cost(tree.root(), tuple);
  q.feasible = q.cost < table.infinity();
  if (q.feasible) q.edges = table.reconstruct(tree.root(), tuple);
  return q;
}

namespace {

void record(SolveStats* stats, const DPTable& table) {
  if (!stats) return;
  ++stats->tables_built;
  stats->entries += table.entry_count();
  stats->cases += table.case_counters();
}

DPTable per_flow_table(const DecompTree& tree, const MultiGraph& g, Flow v, std::size_t max_entries,
                       std::optional<std::span<const Flow>> capacities = std::nullopt) {
  TableOptions opts;
  opts.f_bound = v;
  opts.pinned_flow = v;
  opts.max_entries = max_entries;
  if (capacities) opts.capacities = std::vector<Flow>(capacities->begin(), capacities->end());
  return build_table(tree, g, std::move(opts));
}

void require_plain(const ProblemInstance& instance) {
  if (!instance.upgrades.empty())
    throw std::invalid_argument("instance has upgrade menus; expand them before solving");
}

}  // namespace

Solution solve_capndp(const ProblemInstance& instance, const SolveOptions& options, SolveStats* stats) {
  require_plain(instance);
  const auto& g = instance.graph;
  const Flow demand = instance.demand();
  const Flow F = upper_bound_flow(instance);
  if (stats) stats->f = F;
  if (demand > F) throw InfeasibleDemand(demand, F);
  auto tree = decompose(g);

  QueryResult q;
  if (options.engine == Engine::Table) {
    auto table = build_table(tree, g, TableOptions{.f_bound = F, .max_entries = options.max_entries});
    record(stats, table);
    q = dp_query(table, demand);
  } else {
    auto table = per_flow_table(tree, g, demand, options.max_entries);
    record(stats, table);
    q = dp_query(table, demand);
  }
  if (!q.feasible) throw std::logic_error("DP found no edge set for a demand within the max flow");
  return make_solution(g, std::move(q.edges));
}

Solution solve_bcmfp(const ProblemInstance& instance, const SolveOptions& options, SolveStats* stats) {
  require_plain(instance);
  const auto& g = instance.graph;
  const Cost budget = instance.budget();
  const Flow F = upper_bound_flow(instance);
  if (stats) stats->f = F;
  if (F == 0) return make_solution(g, {});
  auto tree = decompose(g);

  // Minimum cost is non-decreasing in the flow value, so the largest
  // affordable value is found by bisection.
  std::optional<DPTable> table;
  if (options.engine == Engine::Table) {
    table = build_table(tree, g, TableOptions{.f_bound = F, .max_entries = options.max_entries});
    record(stats, *table);
  }
  auto query = [&](Flow v) {
    if (table) return dp_query(*table, v);
    auto t = per_flow_table(tree, g, v, options.max_entries);
    record(stats, t);
    return dp_query(t, v);
  };

  Flow lo = 0, hi = F;
  QueryResult best;  // v = 0: empty set, cost 0
  best.feasible = true;
  while (lo < hi) {
    Flow mid = lo + (hi - lo + 1) / 2;
    auto q = query(mid);
    if (q.feasible && q.cost <= budget) {
      lo = mid;
      best = std::move(q);
    } else {
      hi = mid - 1;
    }
  }
  return make_solution(g, std::move(best.edges));
}

FeasibilityAnswer feasible(const DecompTree& tree, const MultiGraph& graph, Cost budget, Flow flow,
                           std::optional<std::span<const Flow>> capacities) {
  if (flow < 0) throw std::invalid_argument("negative flow target");
  if (capacities)
    for (Flow c : *capacities)
      if (c < 0) throw std::invalid_argument("negative capacity override");
  auto table = per_flow_table(tree, graph, flow, std::numeric_limits<std::size_t>::max(), capacities);
  auto q = dp_query(table, flow);
  FeasibilityAnswer ans;
  ans.entries = table.entry_count();
  ans.yes = q.feasible && q.cost <= budget;
  if (ans.yes) {
    ans.cost = q.cost;
    ans.edges = std::move(q.edges);
  }
  return ans;
}

FeasibilityAnswer feasible(const ProblemInstance& instance, Cost budget, Flow flow,
                           std::optional<std::span<const Flow>> capacities) {
  require_plain(instance);
  return feasible(decompose(instance.graph), instance.graph, budget, flow, capacities);
}

}  // namespace spnd
