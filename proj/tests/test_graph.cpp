#include <gtest/gtest.h>

#include "spnd/graph.hpp"
#include "test_support.hpp"

using namespace spnd;
using spnd::testing::instance_from;

TEST(Parse, SingleEdgeInstance) {
  auto inst = instance_from(spnd::testing::kI1);
  EXPECT_EQ(inst.graph.vertex_count(), 2);
  ASSERT_EQ(inst.graph.edge_count(), 1u);
  EXPECT_EQ(inst.graph.edge(0), (EdgeRecord{"e1", 0, 1, 5, 7}));
  EXPECT_EQ(inst.objective.kind, ProblemKind::Bcmfp);
  EXPECT_EQ(inst.budget(), 5);
  EXPECT_FALSE(inst.graph.declared_terminals().has_value());
}

TEST(Parse, TerminalsCommentsAndSeparators) {
  auto inst = instance_from("# header\ngraph 3 ; terminals 0 2\nsource 0 # trailing\nsink 2\n\n"
                            "edge a 0 1 1 2 ; edge b 1 2 1 2\ndemand 1\n");
  EXPECT_EQ(inst.graph.edge_count(), 2u);
  ASSERT_TRUE(inst.graph.declared_terminals());
  EXPECT_EQ(*inst.graph.declared_terminals(), std::make_pair(0, 2));
  EXPECT_EQ(inst.demand(), 1);
}

TEST(Parse, UpgradeMenu) {
  auto inst = instance_from("graph 2\nsource 0\nsink 1\nupedge u 0 1 2 4 10 7 20\nbudget 7\n");
  ASSERT_EQ(inst.upgrades.size(), 1u);
  EXPECT_EQ(inst.upgrades[0].choices, (std::vector<UpgradeChoice>{{4, 10}, {7, 20}}));
  EXPECT_EQ(inst.graph.edge_count(), 0u);
}

struct BadInput {
  const char* name;
  const char* text;
  std::size_t line;
};

class ParseRejects : public ::testing::TestWithParam<BadInput> {};

TEST_P(ParseRejects, WithLineNumber) {
  try {
    parse_instance(std::string_view(GetParam().text));
    FAIL() << "accepted: " << GetParam().text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), GetParam().line) << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(
    Cases, ParseRejects,
    ::testing::Values(BadInput{"NegativeCost", "graph 2\nsource 0\nsink 1\nedge e1 0 1 -5 7\nbudget 5\n", 4},
                      BadInput{"SelfLoop", "graph 2\nsource 0\nsink 1\nedge e1 0 0 5 7\nbudget 5\n", 4},
                      BadInput{"DuplicateId", "graph 2\nsource 0\nsink 1\nedge e1 0 1 5 7\nedge e1 0 1 1 1\nbudget 5\n", 5},
                      BadInput{"VertexOutOfRange", "graph 2\nsource 0\nsink 1\nedge e1 0 2 5 7\nbudget 5\n", 4},
                      BadInput{"UnknownKeyword", "graph 2\nsource 0\nsink 1\nfoo 1\nbudget 5\n", 4},
                      BadInput{"MissingField", "graph 2\nsource 0\nsink 1\nedge e1 0 1 5\nbudget 5\n", 4},
                      BadInput{"TwoObjectives", "graph 2\nsource 0\nsink 1\nbudget 5\ndemand 1\n", 5},
                      BadInput{"ShortMenu", "graph 2\nsource 0\nsink 1\nupedge u 0 1 2 4 10\nbudget 5\n", 4},
                      BadInput{"EmptyMenu", "graph 2\nsource 0\nsink 1\nupedge u 0 1 0\nbudget 5\n", 4},
                      BadInput{"SourceIsSink", "graph 2\nsource 0\nsink 0\nbudget 5\n", 0},
                      BadInput{"NoObjective", "graph 2\nsource 0\nsink 1\n", 0},
                      BadInput{"NoGraphLine", "source 0\nsink 1\nbudget 1\n", 0}),
    [](const ::testing::TestParamInfo<BadInput>& info) { return std::string(info.param.name); });

TEST(Parse, RoundTripsThroughWriter) {
  auto inst = instance_from(spnd::testing::kI3);
  auto again = parse_instance(std::string_view(write_instance(inst)));
  EXPECT_EQ(again.graph.edges(), inst.graph.edges());
  EXPECT_EQ(again.graph.source(), inst.graph.source());
  EXPECT_EQ(again.graph.sink(), inst.graph.sink());
  EXPECT_EQ(again.graph.declared_terminals(), inst.graph.declared_terminals());
  EXPECT_EQ(again.objective.value, inst.objective.value);

  auto up = instance_from("graph 2\nsource 0\nsink 1\nupedge u 0 1 2 4 10 7 20\nbudget 7\n");
  EXPECT_EQ(parse_instance(std::string_view(write_instance(up))).upgrades, up.upgrades);
}

TEST(MultiGraphTest, ConstructorValidates) {
  EXPECT_THROW(MultiGraph(2, {{"e", 0, 0, 1, 1}}, 0, 1), std::invalid_argument);
  EXPECT_THROW(MultiGraph(2, {{"e", 0, 1, 1, 1}}, 0, 0), std::invalid_argument);
  EXPECT_THROW(MultiGraph(2, {{"e", 0, 1, 1, 1}, {"e", 0, 1, 1, 1}}, 0, 1), std::invalid_argument);
  EXPECT_THROW(MultiGraph(2, {{"e", 0, 1, -1, 1}}, 0, 1), std::invalid_argument);
}

TEST(MultiGraphTest, Accessors) {
  auto g = instance_from(spnd::testing::kI2).graph;
  EXPECT_EQ(g.total_cost(), 5);
  EXPECT_EQ(g.find_edge("e3"), 2u);
  EXPECT_FALSE(g.find_edge("nope"));
  std::vector<Flow> caps{9, 8, 7};
  auto h = g.with_capacities(caps);
  EXPECT_EQ(h.edge(1).capacity, 8);
  EXPECT_EQ(h.edge(1).cost, 1);
  std::vector<EdgeIndex> sel{2, 0};
  EXPECT_EQ(sorted_ids(g, sel), (std::vector<std::string>{"e1", "e3"}));
}

TEST(ObjectiveTest, WrongAccessorThrows) {
  auto inst = instance_from(spnd::testing::kI1);
  EXPECT_THROW((void)inst.demand(), std::logic_error);
}
