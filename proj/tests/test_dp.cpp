#include <gtest/gtest.h>

#include <set>

#include "spnd/dp.hpp"
#include "spnd/generator.hpp"
#include "test_support.hpp"

using namespace spnd;
using spnd::testing::instance_from;
using spnd::testing::with_objective;

namespace {

ResidueAssignment residues_of(const DecompTree& t, NodeId id, const ResidueTuple& r, VertexId n) {
  const auto& node = t.node(id);
  ResidueAssignment out(n);
  out[node.a] += r.a;
  out[node.b] += r.b;
  if (r.s) out[t.source()] += *r.s;
  if (r.t) out[t.sink()] += *r.t;
  return out;
}

/// Cheapest subset of the node's edges routing the tuple, by enumeration.
Cost brute_entry(const MultiGraph& g, const DecompTree& t, NodeId id, const ResidueTuple& r, Cost infinity) {
  auto edges = t.leaf_edges(id);
  auto res = residues_of(t, id, r, g.vertex_count());
  Cost best = infinity;
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    std::vector<EdgeIndex> sel;
    Cost c = 0;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (mask >> i & 1u) {
        sel.push_back(edges[i]);
        c += g.edge(edges[i]).cost;
      }
    if (c < best && circulation_feasible(g, sel, res)) best = c;
  }
  return best;
}

}  // namespace

TEST(LeafCost, Examples) {
  EdgeRecord e{"e", 0, 1, 5, 7};
  EXPECT_EQ(leaf_cost(e, {0, {}, {}, 0}, 100), 0);
  EXPECT_EQ(leaf_cost(e, {-7, {}, {}, 7}, 100), 5);
  EXPECT_EQ(leaf_cost(e, {3, {}, {}, -3}, 100), 5);
  EXPECT_EQ(leaf_cost(e, {-8, {}, {}, 8}, 100), 100);
  EXPECT_THROW(leaf_cost(e, {-1, Flow{1}, {}, 0}, 100), std::invalid_argument);
}

TEST(Classify, SmallTrees) {
  auto t2 = decompose(instance_from(spnd::testing::kI2).graph);
  EXPECT_EQ(classify(t2, t2.root()), DpCase::C1_2);
  auto t1 = decompose(instance_from(spnd::testing::kI1).graph);
  EXPECT_EQ(classify(t1, t1.root()), DpCase::Leaf);
  for (auto c : {DpCase::Leaf, DpCase::C3_5_st}) EXPECT_FALSE(to_string(c).empty());
}

TEST(DpTable, PathWithShortcut) {
  auto inst = instance_from(spnd::testing::kI2);
  auto t = decompose(inst.graph);
  auto table = build_table(t, inst, 3);
  EXPECT_EQ(table.infinity(), 6);
  auto q1 = dp_query(table, 1);
  EXPECT_EQ(q1.cost, 2);
  EXPECT_EQ(q1.edges, (std::vector<EdgeIndex>{0, 1}));
  EXPECT_EQ(dp_query(table, 3).cost, 5);
  EXPECT_EQ(dp_query(table, 0).cost, 0);
  EXPECT_TRUE(dp_query(table, 0).edges.empty());
  EXPECT_THROW(dp_query(table, 4), std::out_of_range);
}

TEST(DpTable, InteriorSourceAndSink) {
  auto inst = instance_from(spnd::testing::kI3);
  auto t = decompose(inst.graph);
  auto table = build_table(t, inst, 3);
  auto root = flow_tuple(t, 3);
  EXPECT_EQ(root, (ResidueTuple{0, Flow{-3}, Flow{3}, 0}));
  EXPECT_EQ(table.cost(t.root(), root), 4);
  EXPECT_EQ(dp_query(table, 2).cost, 1);  // e2 alone
  auto rebuilt = table.reconstruct(t.root(), root);
  EXPECT_EQ(rebuilt.size(), 4u);
}

TEST(DpTable, CombineRejectsWrongShape) {
  auto inst = instance_from(spnd::testing::kI2);
  auto t = decompose(inst.graph);
  auto table = build_table(t, inst, 3);
  EXPECT_THROW(combine_series(table, t.root(), {0, {}, {}, 0}), std::invalid_argument);
  EXPECT_THROW(combine_parallel(table, t.root(), {0, Flow{0}, {}, 0}), std::invalid_argument);
  auto e = combine_parallel(table, t.root(), {-1, {}, {}, 1});
  EXPECT_EQ(e.cost, 2);
}

TEST(DpTable, EntriesAreMinimalCirculations) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    auto inst = generate_sp({seed, 3 + seed % 4, 3, 5, ProblemKind::Bcmfp, 1});
    auto t = decompose(inst.graph);
    Flow F = upper_bound_flow(inst);
    if (F == 0) continue;
    auto table = build_table(t, inst, F);
    for (NodeId id = 0; id < static_cast<NodeId>(t.size()); ++id) {
      for (const auto& r : table.tuples(id)) {
        ASSERT_TRUE(r.balanced());
        // Beyond total throughput F a child coordinate may need more than F,
        // which the bounded table cannot represent.
        Flow positive = std::max<Flow>(r.a, 0) + std::max<Flow>(r.s.value_or(0), 0) +
                        std::max<Flow>(r.t.value_or(0), 0) + std::max<Flow>(r.b, 0);
        if (positive > F) continue;
        Cost want = brute_entry(inst.graph, t, id, r, table.infinity());
        ASSERT_EQ(table.cost(id, r), want) << "seed " << seed << " node " << id << " tuple " << r.to_string();
        if (want < table.infinity()) {
          auto edges = table.reconstruct(id, r);
          Cost c = 0;
          for (auto e : edges) c += inst.graph.edge(e).cost;
          EXPECT_EQ(c, want);
          EXPECT_TRUE(circulation_feasible(inst.graph, edges, residues_of(t, id, r, inst.graph.vertex_count())));
        }
      }
    }
  }
}

TEST(DpTable, StructuralProperties) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto inst = generate_sp({seed, 3 + seed % 8, 4, 6, ProblemKind::Bcmfp, 1});
    auto t = decompose(inst.graph);
    Flow F = upper_bound_flow(inst);
    auto table = build_table(t, inst, F);
    const std::size_t width = static_cast<std::size_t>(2 * F + 1);
    EXPECT_LE(table.entry_count(), (2 * inst.graph.edge_count() - 1) * width * width * width);
    for (NodeId id = 0; id < static_cast<NodeId>(t.size()); ++id) {
      const auto& n = t.node(id);
      ResidueTuple zero{0, n.has_s ? std::optional<Flow>(0) : std::nullopt,
                        n.has_t ? std::optional<Flow>(0) : std::nullopt, 0};
      ASSERT_EQ(table.cost(id, zero), 0);
      EXPECT_TRUE(table.reconstruct(id, zero).empty());
      for (const auto& r : table.tuples(id)) ASSERT_EQ(table.cost(id, r), table.cost(id, r.negated())) << r.to_string();
    }
    Cost prev = 0;
    for (Flow v = 0; v <= F; ++v) {
      Cost c = dp_query(table, v).cost;
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(Solve, MatchesBruteForceForEveryObjective) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    auto inst = generate_sp({seed, 3 + seed % 6, 5, 8, ProblemKind::Bcmfp, 1});
    spnd::testing::BruteTable brute(inst.graph);
    Flow F = brute.flow.back();
    for (Flow d = 0; d <= F; ++d) {
      auto sol = solve_capndp(with_objective(inst, ProblemKind::CapNdp, d));
      ASSERT_EQ(sol.total_cost, *brute.capndp(d)) << "seed " << seed << " D " << d;
      ASSERT_GE(sol.achieved_flow, d);
    }
    for (Cost b = 0; b <= inst.graph.total_cost(); ++b) {
      auto sol = solve_bcmfp(with_objective(inst, ProblemKind::Bcmfp, b));
      ASSERT_EQ(sol.achieved_flow, brute.bcmfp(b)) << "seed " << seed << " B " << b;
      ASSERT_LE(sol.total_cost, b);
    }
  }
}

TEST(Solve, EnginesAgree) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = generate_sp({seed, 4 + seed % 5, 6, 10, ProblemKind::CapNdp, 1});
    SolveStats a, b;
    auto x = solve_capndp(inst, {Engine::Table}, &a);
    auto y = solve_capndp(inst, {Engine::PerFlow}, &b);
    EXPECT_EQ(x.total_cost, y.total_cost) << seed;
    auto bud = with_objective(inst, ProblemKind::Bcmfp, inst.graph.total_cost() / 2);
    EXPECT_EQ(solve_bcmfp(bud, {Engine::Table}).achieved_flow, solve_bcmfp(bud, {Engine::PerFlow}).achieved_flow);
  }
}

TEST(Solve, InfeasibleDemandAndUpgradeMenus) {
  auto i1 = with_objective(instance_from(spnd::testing::kI1), ProblemKind::CapNdp, 8);
  try {
    solve_capndp(i1);
    FAIL();
  } catch (const InfeasibleDemand& e) {
    EXPECT_EQ(e.demand(), 8);
    EXPECT_EQ(e.max_flow(), 7);
  }
  auto up = instance_from("graph 2\nsource 0\nsink 1\nupedge u 0 1 1 4 10\nbudget 7\n");
  EXPECT_THROW(solve_bcmfp(up), std::invalid_argument);
}

TEST(Solve, ZeroCostEdgesGiveEmptySetAtZeroFlow) {
  MultiGraph g(2, {{"free", 0, 1, 0, 3}}, 0, 1);
  ProblemInstance inst{g, {ProblemKind::CapNdp, 0}, {}};
  EXPECT_TRUE(solve_capndp(inst).purchased.empty());
}

TEST(Feasible, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = generate_sp({seed, 4 + seed % 5, 5, 6, ProblemKind::Bcmfp, 1});
    spnd::testing::BruteTable brute(inst.graph);
    Flow F = brute.flow.back();
    for (Flow v = 0; v <= F + 1; ++v)
      for (Cost b = 0; b <= inst.graph.total_cost(); b += 2) {
        auto ans = feasible(inst, b, v);
        bool want = brute.bcmfp(b) >= v;
        ASSERT_EQ(ans.yes, want) << "seed " << seed << " v " << v << " b " << b;
        if (ans.yes) {
          auto s = make_solution(inst.graph, ans.edges);
          EXPECT_LE(s.total_cost, b);
          EXPECT_GE(s.achieved_flow, v);
        }
      }
  }
}

TEST(Feasible, CapacityOverride) {
  auto inst = instance_from(spnd::testing::kI2);
  std::vector<Flow> caps{5, 5, 0};
  EXPECT_TRUE(feasible(inst, 2, 5, caps).yes);
  EXPECT_FALSE(feasible(inst, 2, 6, caps).yes);
  EXPECT_FALSE(feasible(inst, 1, 1, caps).yes);
}

TEST(CaseCounters, EveryShapeFiresOnGeneratedFamily) {
  CaseCounters total;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto inst = generate_sp({seed, 10, 3, 5, ProblemKind::Bcmfp, 1});
    Flow F = upper_bound_flow(inst);
    if (F == 0) continue;
    auto t = decompose(inst.graph);
    total += build_table(t, inst, std::min<Flow>(F, 3)).case_counters();
  }
  auto missing = total.missing();
  std::string names;
  for (auto c : missing) names += std::string(to_string(c)) + " ";
  EXPECT_TRUE(missing.empty()) << names;
}

TEST(ResidueDomainTest, IntervalAndSparse) {
  auto iv = ResidueDomain::interval(-2, 2);
  EXPECT_EQ(iv.size(), 5u);
  EXPECT_EQ(iv.index_of(-2), 0);
  EXPECT_EQ(iv.index_of(3), -1);
  auto sp = ResidueDomain::of_values({4, -4, 0, 4});
  EXPECT_EQ(sp.size(), 3u);
  EXPECT_EQ(sp.value(0), -4);
  EXPECT_FALSE(sp.contains(2));
  EXPECT_FALSE(sp.contiguous());
}

TEST(DpTable, EntryBudgetIsEnforced) {
  auto inst = generate_sp({3, 10, 50, 5, ProblemKind::Bcmfp, 1});
  auto t = decompose(inst.graph);
  TableOptions opts;
  opts.f_bound = upper_bound_flow(inst);
  opts.max_entries = 10;
  EXPECT_THROW(build_table(t, inst.graph, opts), std::length_error);
}
