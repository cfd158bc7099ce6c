#include "spnd/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace spnd {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

MultiGraph::MultiGraph(VertexId vertex_count, std::vector<EdgeRecord> edges, VertexId source,
                       VertexId sink, std::optional<std::pair<VertexId, VertexId>> declared_terminals)
    : vertex_count_(vertex_count),
      edges_(std::move(edges)),
      source_(source),
      sink_(sink),
      declared_terminals_(declared_terminals) {
  auto valid = [&](VertexId v) { return v >= 0 && v < vertex_count_; };
  if (vertex_count_ < 0) throw std::invalid_argument("negative vertex count");
  if (!valid(source_) || !valid(sink_)) throw std::invalid_argument("source/sink out of range");
  if (source_ == sink_) throw std::invalid_argument("source equals sink");
  if (declared_terminals_) {
    auto [a, b] = *declared_terminals_;
    if (!valid(a) || !valid(b) || a == b) throw std::invalid_argument("invalid terminal pair");
  }
  std::unordered_set<std::string> ids;
  for (const auto& e : edges_) {
    if (!valid(e.u) || !valid(e.v)) throw std::invalid_argument("edge " + e.id + ": endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("edge " + e.id + ": self-loop");
    if (e.cost < 0 || e.capacity < 0) throw std::invalid_argument("edge " + e.id + ": negative value");
    if (!ids.insert(e.id).second) throw std::invalid_argument("duplicate edge id " + e.id);
  }
}

Cost MultiGraph::total_cost() const {
  return std::accumulate(edges_.begin(), edges_.end(), Cost{0},
                         [](Cost acc, const EdgeRecord& e) { return acc + e.cost; });
}

std::optional<EdgeIndex> MultiGraph::find_edge(std::string_view id) const {
  for (EdgeIndex i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == id) return i;
  return std::nullopt;
}

MultiGraph MultiGraph::with_capacities(std::span<const Flow> capacities) const {
  if (capacities.size() != edges_.size()) throw std::invalid_argument("capacity override size mismatch");
  auto edges = edges_;
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].capacity = capacities[i];
  return MultiGraph(vertex_count_, std::move(edges), source_, sink_, declared_terminals_);
}

MultiGraph MultiGraph::with_declared_terminals(std::optional<std::pair<VertexId, VertexId>> t) const {
  return MultiGraph(vertex_count_, edges_, source_, sink_, t);
}

Cost ProblemInstance::budget() const {
  if (objective.kind != ProblemKind::Bcmfp) throw std::logic_error("instance carries a demand, not a budget");
  return objective.value;
}

Flow ProblemInstance::demand() const {
  if (objective.kind != ProblemKind::CapNdp) throw std::logic_error("instance carries a budget, not a demand");
  return objective.value;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::size_t line, std::vector<std::string_view> tokens)
      : line_(line), tokens_(std::move(tokens)) {}

  void expect_count(std::size_t n) const {
    if (tokens_.size() != n)
      fail("'" + std::string(tokens_[0]) + "' expects " + std::to_string(n - 1) + " argument(s), got " +
           std::to_string(tokens_.size() - 1));
  }
  void expect_at_least(std::size_t n) const {
    if (tokens_.size() < n) fail("'" + std::string(tokens_[0]) + "' has too few arguments");
  }

  std::int64_t number(std::size_t i) const {
    std::string_view tok = tokens_.at(i);
    if (!tok.empty() && tok[0] == '-') fail("negative number '" + std::string(tok) + "'");
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec == std::errc::result_out_of_range) fail("number out of range '" + std::string(tok) + "'");
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      fail("expected a nonnegative integer, got '" + std::string(tok) + "'");
    return value;
  }

  VertexId vertex(std::size_t i) const {
    auto v = number(i);
    if (v > std::numeric_limits<VertexId>::max()) fail("vertex id too large");
    return static_cast<VertexId>(v);
  }

  std::string_view token(std::size_t i) const { return tokens_.at(i); }
  std::size_t size() const { return tokens_.size(); }
  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

 private:
  std::size_t line_;
  std::vector<std::string_view> tokens_;
};

}  // namespace

ProblemInstance parse_instance(std::istream& in) {
  std::optional<VertexId> n;
  std::optional<VertexId> source, sink;
  std::optional<std::pair<VertexId, VertexId>> terminals;
  std::optional<Objective> objective;
  std::vector<EdgeRecord> edges;
  std::vector<UpgradeEdge> upgrades;
  std::vector<std::size_t> edge_lines, upgrade_lines;
  std::unordered_set<std::string> ids;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    // ';' separates directives sharing one physical line.
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t semi = line.find(';', start);
      std::string_view piece = line.substr(start, semi == std::string_view::npos ? line.npos : semi - start);
      start = semi == std::string_view::npos ? line.size() + 1 : semi + 1;

      auto tokens = tokenize(piece);
      if (tokens.empty()) continue;
      LineParser p(line_no, tokens);
      std::string_view kw = p.token(0);

      auto once = [&](bool already) {
        if (already) p.fail("duplicate '" + std::string(kw) + "' directive");
      };

      if (kw == "graph") {
        p.expect_count(2);
        once(n.has_value());
        n = p.vertex(1);
      } else if (kw == "terminals") {
        p.expect_count(3);
        once(terminals.has_value());
        terminals = std::pair{p.vertex(1), p.vertex(2)};
      } else if (kw == "source") {
        p.expect_count(2);
        once(source.has_value());
        source = p.vertex(1);
      } else if (kw == "sink") {
        p.expect_count(2);
        once(sink.has_value());
        sink = p.vertex(1);
      } else if (kw == "edge") {
        p.expect_count(6);
        EdgeRecord e{std::string(p.token(1)), p.vertex(2), p.vertex(3), p.number(4), p.number(5)};
        if (e.u == e.v) p.fail("self-loop on edge " + e.id);
        if (!ids.insert(e.id).second) p.fail("duplicate edge id " + e.id);
        edges.push_back(std::move(e));
        edge_lines.push_back(line_no);
      } else if (kw == "upedge") {
        p.expect_at_least(5);
        UpgradeEdge up{std::string(p.token(1)), p.vertex(2), p.vertex(3), {}};
        if (up.u == up.v) p.fail("self-loop on edge " + up.id);
        auto k = p.number(4);
        if (k == 0) p.fail("empty upgrade menu on " + up.id);
        if (p.size() != 5 + 2 * static_cast<std::size_t>(k))
          p.fail("upedge " + up.id + " declares " + std::to_string(k) + " choices but lists " +
                 std::to_string((p.size() - 5) / 2));
        for (std::int64_t i = 0; i < k; ++i)
          up.choices.push_back({p.number(5 + 2 * i), p.number(6 + 2 * i)});
        if (!ids.insert(up.id).second) p.fail("duplicate edge id " + up.id);
        upgrades.push_back(std::move(up));
        upgrade_lines.push_back(line_no);
      } else if (kw == "budget" || kw == "demand") {
        p.expect_count(2);
        if (objective) p.fail("objective already given");
        objective = Objective{kw == "budget" ? ProblemKind::Bcmfp : ProblemKind::CapNdp, p.number(1)};
      } else {
        p.fail("unknown directive '" + std::string(kw) + "'");
      }
    }
  }

  if (!n) throw ParseError(0, "missing 'graph' directive");
  if (!source) throw ParseError(0, "missing 'source' directive");
  if (!sink) throw ParseError(0, "missing 'sink' directive");
  if (!objective) throw ParseError(0, "missing objective ('budget' or 'demand')");
  if (*source >= *n || *sink >= *n) throw ParseError(0, "source/sink out of range");
  if (*source == *sink) throw ParseError(0, "source and sink coincide");
  if (terminals) {
    if (terminals->first >= *n || terminals->second >= *n) throw ParseError(0, "terminal out of range");
    if (terminals->first == terminals->second) throw ParseError(0, "terminals coincide");
  }
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].u >= *n || edges[i].v >= *n)
      throw ParseError(edge_lines[i], "edge " + edges[i].id + ": endpoint out of range");
  for (std::size_t i = 0; i < upgrades.size(); ++i)
    if (upgrades[i].u >= *n || upgrades[i].v >= *n)
      throw ParseError(upgrade_lines[i], "upedge " + upgrades[i].id + ": endpoint out of range");

  return ProblemInstance{MultiGraph(*n, std::move(edges), *source, *sink, terminals), *objective,
                         std::move(upgrades)};
}

ProblemInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return parse_instance(in);
}

std::string write_instance(const ProblemInstance& instance) {
  const auto& g = instance.graph;
  std::ostringstream out;
  out << "graph " << g.vertex_count() << '\n';
  if (auto t = g.declared_terminals()) out << "terminals " << t->first << ' ' << t->second << '\n';
  out << "source " << g.source() << '\n' << "sink " << g.sink() << '\n';
  for (const auto& e : g.edges())
    out << "edge " << e.id << ' ' << e.u << ' ' << e.v << ' ' << e.cost << ' ' << e.capacity << '\n';
  for (const auto& up : instance.upgrades) {
    out << "upedge " << up.id << ' ' << up.u << ' ' << up.v << ' ' << up.choices.size();
    for (const auto& c : up.choices) out << ' ' << c.cost << ' ' << c.capacity;
    out << '\n';
  }
  out << (instance.objective.kind == ProblemKind::Bcmfp ? "budget " : "demand ") << instance.objective.value
      << '\n';
  return out.str();
}

std::string_view to_string(ProblemKind kind) { return kind == ProblemKind::Bcmfp ? "bcmfp" : "capndp"; }

std::optional<ProblemKind> problem_kind_from_string(std::string_view s) {
  if (s == "bcmfp") return ProblemKind::Bcmfp;
  if (s == "capndp") return ProblemKind::CapNdp;
  return std::nullopt;
}

std::vector<std::string> sorted_ids(const MultiGraph& g, std::span<const EdgeIndex> edges) {
  std::vector<std::string> ids;
  ids.reserve(edges.size());
  for (auto e : edges) ids.push_back(g.edge(e).id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace spnd
