#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "spnd/cli.hpp"

using spnd::cli::parse_seed_range;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = spnd::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SPND_DATA_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

const std::regex kResult(R"(RESULT cost=\d+ flow=\d+ edges=([A-Za-z0-9_.]+(,[A-Za-z0-9_.]+)*)?)");

}  // namespace

TEST(Cli, SolveTextReport) {
  auto r = run({"solve", data("i2.txt")});
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_FALSE(ls.empty());
  EXPECT_EQ(ls.back(), "RESULT cost=2 flow=2 edges=e1,e2");
  EXPECT_TRUE(std::regex_match(ls.back(), kResult));
  EXPECT_EQ(ls.front(), "problem: capndp");
}

TEST(Cli, SolveBothEnginesAndCsv) {
  auto per_flow = run({"solve", data("i3.txt"), "--engine", "per-flow"});
  EXPECT_EQ(lines(per_flow.out).back(), "RESULT cost=4 flow=3 edges=e1,e2,e3,e4");
  auto csv = run({"solve", data("i2.txt"), "--format", "csv"});
  EXPECT_EQ(csv.out, "problem,cost,flow,edges\ncapndp,2,2,e1;e2\n");
}

TEST(Cli, NotSeriesParallel) {
  for (const char* file : {"k4.txt", "wheel4.txt"}) {
    auto r = run({"solve", data(file)});
    EXPECT_EQ(r.code, 3);
    auto ls = lines(r.err);
    ASSERT_GE(ls.size(), 2u);
    EXPECT_EQ(ls[0], "ERROR 3 not series-parallel");
    EXPECT_EQ(ls[1].rfind("WITNESS ", 0), 0u);
  }
  EXPECT_EQ(run({"decompose", data("k4.txt")}).code, 3);
}

TEST(Cli, Decompose) {
  auto r = run({"decompose", data("i2.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "P(S(L(e1),L(e2))@1,L(e3))\n");
}

TEST(Cli, InfeasibleDemandExitsTwo) {
  for (const char* cmd : {"solve", "oracle"}) {
    auto r = run({cmd, data("infeasible.txt")});
    EXPECT_EQ(r.code, 2) << cmd;
    EXPECT_EQ(r.err.rfind("ERROR 2 ", 0), 0u) << r.err;
  }
  EXPECT_EQ(run({"solve", data("infeasible.txt"), "--engine", "per-flow"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"solve", data("missing.txt")}).code, 1);
  EXPECT_EQ(run({"solve", data("i2.txt"), "--problem", "bcmfp"}).code, 1);
  EXPECT_EQ(run({"solve", data("i2.txt"), "--engine", "fast"}).code, 1);
  EXPECT_EQ(run({"solve", data("i2.txt"), "--K", "3"}).code, 1);
  EXPECT_EQ(run({"fptas", data("i2.txt"), "--epsilon", "1"}).code, 1);  // demand instance
  EXPECT_EQ(run({"fptas", data("i3.txt"), "--epsilon", "0"}).code, 1);
  auto r = run({"solve", data("i2.txt"), "--problem", "bcmfp"});
  EXPECT_EQ(r.err.rfind("ERROR 1 ", 0), 0u);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Verify) {
  auto ok = run({"verify", data("i2.txt"), "--edges", "e1,e2"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("CHECK demand PASS"), std::string::npos);
  auto bad = run({"verify", data("i2.txt"), "--edges", ""});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("CHECK demand FAIL"), std::string::npos);
  EXPECT_EQ(run({"verify", data("i2.txt"), "--edges", "nope"}).code, 1);
}

TEST(Cli, GenRoundTripsThroughSolve) {
  auto gen = run({"gen", "--seed", "5", "--edges", "7", "--problem", "bcmfp"});
  ASSERT_EQ(gen.code, 0);
  EXPECT_EQ(gen.out, run({"gen", "--seed", "5", "--edges", "7", "--problem", "bcmfp"}).out);
  EXPECT_EQ(gen.out.rfind("graph ", 0), 0u);
}

TEST(Cli, Fptas) {
  auto r = run({"fptas", data("i3.txt"), "--epsilon", "1/2"});
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 3u);
  EXPECT_TRUE(std::regex_match(ls[0], std::regex(R"(M_PRIME=(exact|[0-9.e+]+))")));
  EXPECT_EQ(ls[1], "GUARANTEE flow*(1+eps) >= OPT");
  EXPECT_TRUE(std::regex_match(ls.back(), kResult));
}

TEST(Cli, Upgrades) {
  auto r = run({"solve", data("upgrade.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("UPGRADE u1 choice=2\n"), std::string::npos);
  EXPECT_EQ(lines(r.out).back(), "RESULT cost=9 flow=20 edges=e1,u1");
}

TEST(Cli, Lattice) {
  auto r = run({"solve", data("i2.txt"), "--lattice", "1", "--K", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).back(), "RESULT cost=2 flow=2 edges=e1,e2");
  EXPECT_EQ(run({"solve", data("i2.txt"), "--lattice", "2", "--K", "5"}).code, 1);
}

TEST(Cli, Sweep) {
  auto r = run({"sweep", "--seeds", "1..6", "--edges", "7"});
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "seed,m,F,opt_cost,opt_flow,dp_ms,oracle_ms,match");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    EXPECT_EQ(ls[i].rfind(std::to_string(i) + ",7,", 0), 0u) << ls[i];
    EXPECT_EQ(ls[i].substr(ls[i].size() - 2), ",1") << ls[i];
  }
  auto empty = run({"sweep", "--seeds", "5..4"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(lines(empty.out).size(), 1u);
  auto states = run({"sweep", "--seeds", "1..2", "--states", "--problem", "capndp"});
  EXPECT_EQ(lines(states.out)[0], "seed,m,F,opt_cost,opt_flow,dp_ms,oracle_ms,match,states");
  EXPECT_EQ(run({"sweep", "--format", "text"}).code, 1);
}

TEST(Cli, SeedRange) {
  EXPECT_EQ(parse_seed_range("3..5"), (std::vector<std::uint64_t>{3, 4, 5}));
  EXPECT_EQ(parse_seed_range("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_TRUE(parse_seed_range("5..4").empty());
  EXPECT_THROW(parse_seed_range("a..b"), std::invalid_argument);
}
