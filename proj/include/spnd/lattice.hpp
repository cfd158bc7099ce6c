#pragma once

#include <string>
#include <vector>

#include "spnd/dp.hpp"
#include "spnd/graph.hpp"
#include "spnd/max_flow.hpp"

namespace spnd {

/// Capacities of the form sum(alpha_i * d_i) with |alpha_i| <= K.
struct LatticeSpec {
  std::vector<Flow> basis;
  std::int64_t bound = 1;  // K
  /// Warn when the residue count bound (2 m^2 K + 1)^k exceeds this.
  double state_budget = 1e7;
};

/// { sum(alpha_i * d_i) : |alpha_i| <= coefficient_bound } intersected with
/// [-limit, limit], sorted and deduplicated.
std::vector<Flow> lattice_span(const std::vector<Flow>& basis, std::int64_t coefficient_bound, Flow limit);

/// Residue values the restricted DP iterates over: coefficients up to m^2 K,
/// clipped to [-F, F].
std::vector<Flow> lattice_residues(const LatticeSpec& spec, std::size_t edge_count, Flow f_bound);

/// Throws std::invalid_argument naming the first capacity outside the
/// lattice. Returns advisory warnings.
std::vector<std::string> validate_lattice(const LatticeSpec& spec, const MultiGraph& g);

struct LatticeStats {
  std::size_t residue_count = 0;
  std::size_t entries = 0;
  Flow f = 0;
  std::vector<std::string> warnings;
};

/// Solves the instance's BCMFP or CapNDP with residues restricted to the lattice.
Solution solve_lattice(const ProblemInstance& instance, const LatticeSpec& spec, LatticeStats* stats = nullptr);

}  // namespace spnd
