#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "spnd/decompose.hpp"
#include "spnd/generator.hpp"
#include "test_support.hpp"

using namespace spnd;
using spnd::testing::instance_from;

namespace {

void expect_well_formed(const DecompTree& t, const MultiGraph& g) {
  ASSERT_EQ(t.size(), 2 * g.edge_count() - 1);
  std::vector<int> seen(g.edge_count(), 0);
  for (const auto& n : t.nodes())
    if (n.kind == NodeKind::Leaf) ++seen[n.edge];
  for (auto c : seen) EXPECT_EQ(c, 1);
  auto order = t.postorder();
  ASSERT_EQ(order.size(), t.size());
  std::vector<bool> done(t.size(), false);
  for (NodeId id : order) {
    const auto& n = t.node(id);
    if (n.kind != NodeKind::Leaf) {
      EXPECT_TRUE(done[static_cast<std::size_t>(n.left)]);
      EXPECT_TRUE(done[static_cast<std::size_t>(n.right)]);
    }
    done[static_cast<std::size_t>(id)] = true;
  }
  EXPECT_EQ(order.back(), t.root());
}

MultiGraph random_multigraph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(2, 5), ne(1, 7);
  for (;;) {
    int n = nv(rng), m = ne(rng);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<EdgeRecord> edges;
    std::vector<bool> touched(static_cast<std::size_t>(n), false);
    for (int i = 0; i < m; ++i) {
      int u = pick(rng), v = pick(rng);
      if (u == v) continue;
      edges.push_back({"e" + std::to_string(edges.size() + 1), u, v, 1, 1});
      touched[static_cast<std::size_t>(u)] = touched[static_cast<std::size_t>(v)] = true;
    }
    if (edges.empty() || std::find(touched.begin(), touched.end(), false) != touched.end()) continue;
    return MultiGraph(n, std::move(edges), 0, 1);
  }
}

}  // namespace

TEST(Decompose, PathWithShortcut) {
  auto g = instance_from(spnd::testing::kI2).graph;
  auto t = decompose(g);
  EXPECT_EQ(t.to_string(), "P(S(L(e1),L(e2))@1,L(e3))");
  expect_well_formed(t, g);
  const auto& root = t.node(t.root());
  EXPECT_EQ(root.kind, NodeKind::Parallel);
  EXPECT_EQ(std::minmax(root.a, root.b), std::minmax(0, 2));
  EXPECT_FALSE(root.has_s);
  EXPECT_FALSE(root.has_t);
}

TEST(Decompose, InteriorTerminalsFlagged) {
  auto g = instance_from(spnd::testing::kI3).graph;
  auto t = decompose(g);
  expect_well_formed(t, g);
  EXPECT_TRUE(t.node(t.root()).has_s);
  EXPECT_TRUE(t.node(t.root()).has_t);
  for (const auto& n : t.nodes()) {
    if (n.kind == NodeKind::Leaf) {
      EXPECT_FALSE(n.has_s || n.has_t);
    }
  }
}

TEST(Decompose, SingleEdge) {
  auto g = instance_from(spnd::testing::kI1).graph;
  auto t = decompose(g);
  EXPECT_EQ(t.to_string(), "L(e1)");
  EXPECT_EQ(t.size(), 1u);
}

TEST(Decompose, RejectsK4AndWheel) {
  for (const char* text : {spnd::testing::kK4, spnd::testing::kWheel4}) {
    auto g = instance_from(text).graph;
    try {
      decompose(g);
      FAIL() << "accepted a non-SP graph";
    } catch (const NotSeriesParallel& e) {
      EXPECT_STREQ(e.what(), "not series-parallel");
      EXPECT_FALSE(e.witness().empty());
    }
  }
}

TEST(Decompose, RejectsDisconnectedAndEmpty) {
  MultiGraph split(4, {{"a", 0, 1, 1, 1}, {"b", 2, 3, 1, 1}}, 0, 3);
  EXPECT_THROW(decompose(split), NotSeriesParallel);
  MultiGraph empty(2, {}, 0, 1);
  EXPECT_THROW(decompose(empty), NotSeriesParallel);
}

TEST(Decompose, DeclaredTerminalsAreRespected) {
  // A path 0-1-2 is SP for (0, 2) but not for (0, 1).
  MultiGraph path(3, {{"a", 0, 1, 1, 1}, {"b", 1, 2, 1, 1}}, 0, 2, std::make_pair(0, 2));
  EXPECT_NO_THROW(decompose(path));
  EXPECT_THROW(decompose(path, 0, 1), NotSeriesParallel);
}

TEST(Decompose, AgreesWithRecursiveDefinition) {
  std::mt19937_64 rng(2024);
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    auto g = random_multigraph(rng);
    spnd::testing::BruteSpRecognizer brute(g);
    bool expect = brute.is_sp_any();
    bool got = true;
    try {
      auto t = decompose(g);
      expect_well_formed(t, g);
      EXPECT_TRUE(brute.is_sp(t.terminal_a(), t.terminal_b()));
    } catch (const NotSeriesParallel&) {
      got = false;
    }
    ASSERT_EQ(got, expect) << write_instance(ProblemInstance{g, {}, {}});
    (got ? accepted : rejected)++;
  }
  EXPECT_GT(accepted, 100);
  EXPECT_GT(rejected, 100);
}

TEST(Decompose, FixedPairAgreesWithRecursiveDefinition) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    auto g = random_multigraph(rng);
    spnd::testing::BruteSpRecognizer brute(g);
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (VertexId b = a + 1; b < g.vertex_count(); ++b) {
        bool got = true;
        try {
          decompose(g, a, b);
        } catch (const NotSeriesParallel&) {
          got = false;
        }
        ASSERT_EQ(got, brute.is_sp(a, b)) << "pair " << a << "," << b;
      }
  }
}

TEST(Recompose, IdentityUpToRelabeling) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto g = generate_sp({seed, 1 + seed % 12, 9, 9, ProblemKind::Bcmfp, 1}).graph;
    auto t = decompose(g);
    auto back = recompose(t);
    std::vector<std::pair<VertexId, VertexId>> pinned{{t.terminal_a(), 0}, {t.terminal_b(), 1}};
    ASSERT_TRUE(spnd::testing::isomorphic_by_edges(g, back, pinned)) << "seed " << seed;
    // Same shape; join labels differ by the relabeling.
    const std::regex join("@[0-9]+");
    EXPECT_EQ(std::regex_replace(decompose(back).to_string(), join, ""), std::regex_replace(t.to_string(), join, ""))
        << "seed " << seed;
  }
}

TEST(Postorder, FreeFunctionMatchesMember) {
  auto t = decompose(instance_from(spnd::testing::kI3).graph);
  EXPECT_EQ(postorder(t), t.postorder());
  auto leaves = t.leaf_edges(t.root());
  std::sort(leaves.begin(), leaves.end());
  EXPECT_EQ(leaves, (std::vector<EdgeIndex>{0, 1, 2, 3}));
}
