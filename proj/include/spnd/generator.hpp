#pragma once

#include <cstdint>

#include "spnd/graph.hpp"

namespace spnd {

struct GeneratorParams {
  std::uint64_t seed = 1;
  std::size_t edges = 8;
  Flow cap_max = 6;
  Cost cost_max = 10;
  ProblemKind problem = ProblemKind::Bcmfp;
  /// Multiplies every capacity (and the demand) after sampling, so instances
  /// that differ only in this factor share topology and costs.
  Flow cap_scale = 1;
};

/// Random series-parallel instance with exactly `edges` edges, built from a
/// random composition tree. Deterministic per parameter set.
ProblemInstance generate_sp(const GeneratorParams& params);

}  // namespace spnd
