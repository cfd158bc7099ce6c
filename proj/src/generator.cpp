#include "spnd/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "spnd/max_flow.hpp"

namespace spnd {

namespace {

class Composer {
 public:
  Composer(std::mt19937_64& rng, const GeneratorParams& p) : rng_(rng), p_(p) {}

  void build(std::size_t m, VertexId a, VertexId b) {
    if (m == 1) {
      edges_.push_back(EdgeRecord{"", a, b, draw<Cost>(0, p_.cost_max), draw<Flow>(1, p_.cap_max)});
      return;
    }
    auto left = draw<std::size_t>(1, m - 1);
    if (draw<int>(0, 1) == 0) {
      VertexId mid = vertices_++;
      build(left, a, mid);
      build(m - left, mid, b);
    } else {
      build(left, a, b);
      build(m - left, a, b);
    }
  }

  template <class T>
  T draw(T lo, T hi) {
    return std::uniform_int_distribution<T>(lo, hi)(rng_);
  }

  std::vector<EdgeRecord> edges_;
  VertexId vertices_ = 2;

 private:
  std::mt19937_64& rng_;
  const GeneratorParams& p_;
};

}  // namespace

ProblemInstance generate_sp(const GeneratorParams& params) {
  if (params.edges < 1) throw std::invalid_argument("generator needs at least one edge");
  if (params.cap_max < 1 || params.cost_max < 0 || params.cap_scale < 1)
    throw std::invalid_argument("generator ranges must satisfy cap_max >= 1, cost_max >= 0, cap_scale >= 1");

  std::mt19937_64 rng(params.seed);
  Composer c(rng, params);
  c.build(params.edges, 0, 1);

  std::vector<VertexId> relabel(static_cast<std::size_t>(c.vertices_));
  std::iota(relabel.begin(), relabel.end(), 0);
  std::shuffle(relabel.begin(), relabel.end(), rng);
  // Edge order drives the reduction tie-breaks; shuffling it varies tree shapes.
  std::shuffle(c.edges_.begin(), c.edges_.end(), rng);
  for (std::size_t i = 0; i < c.edges_.size(); ++i) c.edges_[i].id = "e" + std::to_string(i + 1);
  for (auto& e : c.edges_) {
    e.u = relabel[static_cast<std::size_t>(e.u)];
    e.v = relabel[static_cast<std::size_t>(e.v)];
  }
  const VertexId n = c.vertices_;
  VertexId s = c.draw<VertexId>(0, n - 1);
  VertexId t = c.draw<VertexId>(0, n - 2);
  if (t >= s) ++t;
  std::pair<VertexId, VertexId> terminals{relabel[0], relabel[1]};

  ProblemInstance inst;
  inst.graph = MultiGraph(n, c.edges_, s, t, terminals);
  inst.objective.kind = params.problem;
  if (params.problem == ProblemKind::Bcmfp) {
    inst.objective.value = c.draw<Cost>(0, inst.graph.total_cost());
  } else {
    Flow f = max_flow(inst.graph).value;
    inst.objective.value = f >= 1 ? c.draw<Flow>(1, f) : 0;
  }

  if (params.cap_scale != 1) {
    std::vector<Flow> caps;
    for (const auto& e : inst.graph.edges()) caps.push_back(e.capacity * params.cap_scale);
    inst.graph = inst.graph.with_capacities(caps);
    if (params.problem == ProblemKind::CapNdp) inst.objective.value *= params.cap_scale;
  }
  return inst;
}

}  // namespace spnd
