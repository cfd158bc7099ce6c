#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spnd/decompose.hpp"
#include "spnd/graph.hpp"
#include "spnd/max_flow.hpp"

namespace spnd {

/// Residues (net inflow) at a subgraph's terminals and at the source / sink
/// when those lie strictly inside it. Present entries sum to zero.
struct ResidueTuple {
  Flow a = 0;
  std::optional<Flow> s;
  std::optional<Flow> t;
  Flow b = 0;

  bool balanced() const { return a + s.value_or(0) + t.value_or(0) + b == 0; }
  ResidueTuple negated() const;
  std::size_t arity() const { return 2 + (s ? 1 : 0) + (t ? 1 : 0); }
  std::string to_string() const;
  bool operator==(const ResidueTuple&) const = default;
};

/// Sorted set of residue values admissible at every tuple coordinate:
/// either the full interval [lo, hi] or an explicit sparse set.
class ResidueDomain {
 public:
  ResidueDomain() = default;
  static ResidueDomain interval(Flow lo, Flow hi);
  static ResidueDomain of_values(std::vector<Flow> values);

  std::size_t size() const { return contiguous_ ? static_cast<std::size_t>(hi_ - lo_ + 1) : values_.size(); }
  Flow value(std::size_t i) const { return contiguous_ ? lo_ + static_cast<Flow>(i) : values_[i]; }
  /// Index of `v`, or -1 when `v` is not in the domain.
  std::ptrdiff_t index_of(Flow v) const;
  bool contains(Flow v) const { return index_of(v) >= 0; }
  bool contiguous() const { return contiguous_; }

 private:
  bool contiguous_ = true;
  Flow lo_ = 0;
  Flow hi_ = -1;
  std::vector<Flow> values_;
};

/// Recurrence shapes. Mirrors: `_st` exchanges the roles of source and sink,
/// `_lr` exchanges the two children of the composition.
enum class DpCase : std::uint8_t {
  Leaf,
  C1_1, C1_2,
  C2_1, C2_1_st,
  C2_2, C2_2_st, C2_2_lr, C2_2_st_lr,
  C2_3, C2_3_st, C2_3_lr, C2_3_st_lr,
  C3_1, C3_1_st, C3_1_lr, C3_1_st_lr,
  C3_2, C3_2_st,
  C3_3, C3_3_lr,
  C3_4, C3_4_lr,
  C3_5, C3_5_st,
  Count
};
inline constexpr std::size_t kDpCaseCount = static_cast<std::size_t>(DpCase::Count);
std::string_view to_string(DpCase c);

/// Which recurrence evaluates `node`.
DpCase classify(const DecompTree& tree, NodeId node);

/// Number of entries evaluated per recurrence shape.
struct CaseCounters {
  std::array<std::uint64_t, kDpCaseCount> counts{};

  void add(DpCase c, std::uint64_t n) { counts[static_cast<std::size_t>(c)] += n; }
  std::uint64_t operator[](DpCase c) const { return counts[static_cast<std::size_t>(c)]; }
  CaseCounters& operator+=(const CaseCounters& other);
  /// Shapes (leaf included) that never fired.
  std::vector<DpCase> missing() const;
};

struct LeafChoice {
  bool buy = false;
};
struct SeriesChoice {
  ResidueTuple left, right;
};
struct ParallelChoice {
  Flow split = 0;  // residue at `a` routed through the left child
  ResidueTuple left, right;
};

struct DPEntry {
  Cost cost = 0;
  std::variant<LeafChoice, SeriesChoice, ParallelChoice> choice;
};

struct TableOptions {
  /// Bound on every residue coordinate.
  Flow f_bound = 0;
  /// Restrict every coordinate and every parallel split to these values
  /// (intersected with [-f_bound, f_bound]). Empty: the full interval.
  std::optional<std::vector<Flow>> residue_values;
  /// Fix interior source / sink residues to -v / +v (only tuples reachable
  /// from a query for flow value v are stored).
  std::optional<Flow> pinned_flow;
  /// Capacity override, indexed by edge.
  std::optional<std::vector<Flow>> capacities;
  /// Refuse to allocate beyond this many entries.
  std::size_t max_entries = 400'000'000;
};

class DPTable;

/// Table of minimum-cost edge subsets, one entry per (tree node, residue tuple).
class DPTable {
 public:
  const DecompTree& tree() const { return tree_; }
  Flow f_bound() const { return f_bound_; }
  Cost infinity() const { return infinity_; }
  const ResidueDomain& domain() const { return base_; }
  std::optional<Flow> pinned_flow() const { return pinned_; }
  Flow capacity(EdgeIndex e) const { return capacities_[e]; }

  /// Stored cost, or infinity() for tuples outside the table.
  Cost cost(NodeId node, const ResidueTuple& tuple) const;
  DPEntry entry(NodeId node, const ResidueTuple& tuple) const;
  /// Edge set realizing a finite entry.
  std::vector<EdgeIndex> reconstruct(NodeId node, const ResidueTuple& tuple) const;

  std::size_t entry_count() const;
  std::size_t entry_count(NodeId node) const { return cost_[static_cast<std::size_t>(node)].size(); }
  const CaseCounters& case_counters() const { return cases_; }

  /// Every tuple of `node` whose coordinates all lie in the domain (finite or not).
  std::vector<ResidueTuple> tuples(NodeId node) const;

 private:
  friend DPTable build_table(const DecompTree&, const MultiGraph&, TableOptions);
  friend DPEntry combine_series(const DPTable&, NodeId, const ResidueTuple&);
  friend DPEntry combine_parallel(const DPTable&, NodeId, const ResidueTuple&);

  struct Raw {
    Flow a, s, t, b;  // s / t are 0 when absent
  };

  const ResidueDomain& s_domain(NodeId n) const;
  const ResidueDomain& t_domain(NodeId n) const;
  std::ptrdiff_t slot(NodeId node, const Raw& r) const;
  Cost lookup(NodeId node, const Raw& r) const;
  Raw raw(NodeId node, const ResidueTuple& tuple) const;
  ResidueTuple cook(NodeId node, const Raw& r) const;
  Raw left_of_series(NodeId node, const Raw& r) const;
  Raw right_of_series(NodeId node, const Raw& r) const;
  std::pair<Raw, Raw> parallel_children(NodeId node, const Raw& r, Flow split) const;
  Cost series_cost(NodeId node, const Raw& r) const;
  std::pair<Cost, Flow> parallel_best(NodeId node, const Raw& r) const;
  Cost add(Cost x, Cost y) const { return (x >= infinity_ || y >= infinity_) ? infinity_ : x + y; }

  DecompTree tree_;
  Flow f_bound_ = 0;
  Cost infinity_ = 1;
  std::optional<Flow> pinned_;
  ResidueDomain base_;
  ResidueDomain pinned_s_, pinned_t_;
  std::vector<Flow> capacities_;
  std::vector<Cost> edge_cost_;
  std::vector<std::vector<Cost>> cost_;
  std::vector<std::vector<Flow>> split_;
  CaseCounters cases_;
};

/// Max s-t flow with every edge purchased.
Flow upper_bound_flow(const ProblemInstance& instance);

/// 0 for the empty circulation, the edge cost when 0 < |r_a| <= capacity,
/// `infinity` otherwise. Throws std::invalid_argument for 3/4-tuples.
Cost leaf_cost(const EdgeRecord& edge, const ResidueTuple& tuple, Cost infinity);

/// Evaluate the series / parallel recurrence for one tuple of `node`, reading
/// the children's entries from `table`. Throw std::invalid_argument when the
/// tuple's shape does not match the node's interior source / sink.
DPEntry combine_series(const DPTable& table, NodeId node, const ResidueTuple& tuple);
DPEntry combine_parallel(const DPTable& table, NodeId node, const ResidueTuple& tuple);

DPTable build_table(const DecompTree& tree, const MultiGraph& graph, TableOptions options);
DPTable build_table(const DecompTree& tree, const ProblemInstance& instance, Flow f_bound);

/// Root tuple for sending `v` units from source to sink: -v at s, +v at t,
/// folded into a terminal slot when s or t is a root terminal.
ResidueTuple flow_tuple(const DecompTree& tree, Flow v);

struct QueryResult {
  Cost cost = 0;
  bool feasible = false;
  std::vector<EdgeIndex> edges;  // ascending; empty when infeasible
};

/// Cheapest edge set carrying `v` units from source to sink. Throws
/// std::out_of_range when v exceeds the table's bound.
QueryResult dp_query(const DPTable& table, Flow v);

enum class Engine {
  /// One table over all tuples with |r| <= F; every flow value answered from it.
  Table,
  /// One table per queried flow value v, with interior source / sink residues
  /// pinned to -v / +v and |r| <= v.
  PerFlow,
};

struct SolveOptions {
  Engine engine = Engine::Table;
  std::size_t max_entries = 400'000'000;
};

struct SolveStats {
  std::size_t tables_built = 0;
  std::size_t entries = 0;  // summed over all tables built
  CaseCounters cases;
  Flow f = 0;
};

/// Minimum-cost edge set with max flow >= D. Throws InfeasibleDemand when D > F.
Solution solve_capndp(const ProblemInstance& instance, const SolveOptions& options = {},
                      SolveStats* stats = nullptr);
/// Maximum-flow edge set of cost <= B.
Solution solve_bcmfp(const ProblemInstance& instance, const SolveOptions& options = {},
                     SolveStats* stats = nullptr);

struct FeasibilityAnswer {
  bool yes = false;
  std::vector<EdgeIndex> edges;  // witness when yes
  Cost cost = 0;
  std::size_t entries = 0;  // states in the table that answered
};

/// Is there an edge set of cost <= budget carrying `flow` units from source
/// to sink, under the optional capacity override?
FeasibilityAnswer feasible(const ProblemInstance& instance, Cost budget, Flow flow,
                           std::optional<std::span<const Flow>> capacities = std::nullopt);
/// Same, reusing an existing decomposition of the instance's graph.
FeasibilityAnswer feasible(const DecompTree& tree, const MultiGraph& graph, Cost budget, Flow flow,
                           std::optional<std::span<const Flow>> capacities = std::nullopt);

}  // namespace spnd
