#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spnd {

using Flow = std::int64_t;
using Cost = std::int64_t;
using VertexId = std::int32_t;
using EdgeIndex = std::size_t;

/// Thrown for malformed instance text. `line()` is 1-based, 0 when the
/// problem is not tied to a single line (e.g. a missing directive).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct EdgeRecord {
  std::string id;
  VertexId u = 0;
  VertexId v = 0;
  Cost cost = 0;
  Flow capacity = 0;

  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool operator==(const EdgeRecord&) const = default;
};

/// Undirected multigraph with a designated source and sink.
class MultiGraph {
 public:
  MultiGraph() = default;
  MultiGraph(VertexId vertex_count, std::vector<EdgeRecord> edges, VertexId source, VertexId sink,
             std::optional<std::pair<VertexId, VertexId>> declared_terminals = std::nullopt);

  VertexId vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const EdgeRecord& edge(EdgeIndex e) const { return edges_[e]; }
  VertexId source() const { return source_; }
  VertexId sink() const { return sink_; }
  const std::optional<std::pair<VertexId, VertexId>>& declared_terminals() const {
    return declared_terminals_;
  }

  Cost total_cost() const;
  /// Index of the edge with the given id, if any.
  std::optional<EdgeIndex> find_edge(std::string_view id) const;

  /// Copy with capacities replaced; `capacities` is indexed by edge.
  MultiGraph with_capacities(std::span<const Flow> capacities) const;
  MultiGraph with_declared_terminals(std::optional<std::pair<VertexId, VertexId>> t) const;

 private:
  VertexId vertex_count_ = 0;
  std::vector<EdgeRecord> edges_;
  VertexId source_ = 0;
  VertexId sink_ = 1;
  std::optional<std::pair<VertexId, VertexId>> declared_terminals_;
};

/// An `upedge` record: an edge that may be bought at one of several levels.
struct UpgradeChoice {
  Cost cost = 0;
  Flow capacity = 0;
  bool operator==(const UpgradeChoice&) const = default;
};

struct UpgradeEdge {
  std::string id;
  VertexId u = 0;
  VertexId v = 0;
  std::vector<UpgradeChoice> choices;  // input order
  bool operator==(const UpgradeEdge&) const = default;
};

enum class ProblemKind { Bcmfp, CapNdp };

struct Objective {
  ProblemKind kind = ProblemKind::Bcmfp;
  /// Budget B for BCMFP, demand D for CapNDP.
  std::int64_t value = 0;
};

struct ProblemInstance {
  MultiGraph graph;
  Objective objective;
  std::vector<UpgradeEdge> upgrades;

  Cost budget() const;
  Flow demand() const;
};

ProblemInstance parse_instance(std::istream& in);
ProblemInstance parse_instance(std::string_view text);
ProblemInstance load_instance(const std::string& path);

/// Serializes in the same line format `parse_instance` reads.
std::string write_instance(const ProblemInstance& instance);

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> problem_kind_from_string(std::string_view s);

/// Edge ids of `edges`, sorted lexicographically.
std::vector<std::string> sorted_ids(const MultiGraph& g, std::span<const EdgeIndex> edges);

}  // namespace spnd
