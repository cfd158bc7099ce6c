#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "spnd/dp.hpp"
#include "spnd/graph.hpp"
#include "spnd/max_flow.hpp"
#include "spnd/rational.hpp"

namespace spnd {

using BigInt = boost::multiprecision::cpp_int;

struct ScaleParams {
  Rational epsilon;
  Rational epsilon_prime;  // min(1, epsilon / 3)
  Flow target_r = 0;       // ceil(m / epsilon')
};

/// Throws std::invalid_argument unless epsilon > 0.
ScaleParams make_scale_params(const Rational& epsilon, std::size_t edge_count);

/// A rung of the geometric ladder M = (1 + eps')^index, kept exact.
struct ScaleLevel {
  std::size_t index = 0;
  BigInt num = 1;
  BigInt den = 1;

  static ScaleLevel integer(Flow m);
  double approx() const;
};

ScaleLevel ladder_level(const Rational& epsilon_prime, std::size_t index);
/// Largest index whose level does not exceed `f` (0 when f < 1 + eps').
std::size_t ladder_top(const Rational& epsilon_prime, Flow f);

/// floor(m * u_e / (M * eps')) for every edge, in exact arithmetic.
std::vector<Flow> scale_capacities(const MultiGraph& g, const ScaleLevel& level, const Rational& epsilon_prime);
std::vector<Flow> scale_capacities(const MultiGraph& g, Flow level, const Rational& epsilon_prime);

struct FptasResult {
  Solution solution;
  ScaleParams params;
  Flow max_flow = 0;  // F
  /// How the answer was obtained.
  enum class Mode { AllAffordable, Exact, Scaled, SmallOptimum } mode = Mode::Scaled;
  std::optional<ScaleLevel> chosen;  // M' in Scaled mode
  std::size_t ladder_top = 0;
  std::size_t queries = 0;
  std::size_t max_query_entries = 0;
};

/// Budget-constrained max flow within a (1 + epsilon) factor of optimal.
FptasResult fptas_bcmfp(const ProblemInstance& instance, const Rational& epsilon);

}  // namespace spnd
