#include "spnd/fptas.hpp"

#include <cmath>
#include <limits>

namespace spnd {

ScaleParams make_scale_params(const Rational& epsilon, std::size_t edge_count) {
  if (epsilon.num() <= 0) throw std::invalid_argument("epsilon must be positive, got " + epsilon.to_string());
  ScaleParams p;
  p.epsilon = epsilon;
  p.epsilon_prime = min(Rational(1), epsilon / 3);
  // ceil(m / (num/den)) = ceil(m * den / num)
  auto m = static_cast<__int128>(edge_count) * p.epsilon_prime.den();
  auto q = static_cast<__int128>(p.epsilon_prime.num());
  p.target_r = static_cast<Flow>((m + q - 1) / q);
  return p;
}

ScaleLevel ScaleLevel::integer(Flow m) {
  if (m < 1) throw std::invalid_argument("scale level must be at least 1");
  ScaleLevel s;
  s.num = m;
  s.den = 1;
  return s;
}

double ScaleLevel::approx() const {
  // Both parts can exceed double range on long ladders; compare magnitudes.
  auto bits_num = num == 0 ? 0u : boost::multiprecision::msb(num);
  auto bits_den = boost::multiprecision::msb(den);
  auto shift = std::max<long>(0, static_cast<long>(std::max(bits_num, bits_den)) - 60);
  double n = static_cast<double>(static_cast<long double>(BigInt(num >> shift)));
  double d = static_cast<double>(static_cast<long double>(BigInt(den >> shift)));
  return n / d;
}

ScaleLevel ladder_level(const Rational& epsilon_prime, std::size_t index) {
  ScaleLevel s;
  s.index = index;
  BigInt base_num = epsilon_prime.num() + epsilon_prime.den();
  BigInt base_den = epsilon_prime.den();
  s.num = boost::multiprecision::pow(base_num, static_cast<unsigned>(index));
  s.den = boost::multiprecision::pow(base_den, static_cast<unsigned>(index));
  return s;
}

std::size_t ladder_top(const Rational& epsilon_prime, Flow f) {
  const BigInt base_num = epsilon_prime.num() + epsilon_prime.den();
  const BigInt base_den = epsilon_prime.den();
  BigInt num = 1, den = 1;
  std::size_t j = 0;
  // (1 + eps')^(j+1) <= f  <=>  num * base_num <= f * den * base_den
  while (num * base_num <= BigInt(f) * den * base_den) {
    num *= base_num;
    den *= base_den;
    ++j;
  }
  return j;
}

std::vector<Flow> scale_capacities(const MultiGraph& g, const ScaleLevel& level, const Rational& epsilon_prime) {
  // m * u / ((P/Q) * (p/q)) = m * u * Q * q / (P * p)
  const BigInt denom = level.num * epsilon_prime.num();
  const BigInt factor = BigInt(g.edge_count()) * level.den * epsilon_prime.den();
  std::vector<Flow> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    BigInt scaled = factor * e.capacity / denom;  // nonnegative: truncation is floor
    if (scaled > std::numeric_limits<Flow>::max()) throw std::overflow_error("scaled capacity overflows");
    out.push_back(static_cast<Flow>(scaled));
  }
  return out;
}

std::vector<Flow> scale_capacities(const MultiGraph& g, Flow level, const Rational& epsilon_prime) {
  return scale_capacities(g, ScaleLevel::integer(level), epsilon_prime);
}

FptasResult fptas_bcmfp(const ProblemInstance& instance, const Rational& epsilon) {
  if (!instance.upgrades.empty()) throw std::invalid_argument("instance has upgrade menus; expand them first");
  const auto& g = instance.graph;
  const Cost budget = instance.budget();

  FptasResult res;
  res.params = make_scale_params(epsilon, g.edge_count());
  res.max_flow = upper_bound_flow(instance);

  if (g.total_cost() <= budget) {
    std::vector<EdgeIndex> all(g.edge_count());
    for (EdgeIndex e = 0; e < all.size(); ++e) all[e] = e;
    res.mode = FptasResult::Mode::AllAffordable;
    res.solution = make_solution(g, std::move(all));
    return res;
  }
  if (res.max_flow <= res.params.target_r) {
    // The pseudopolynomial table is already polynomially sized here.
    SolveStats stats;
    res.mode = FptasResult::Mode::Exact;
    res.solution = solve_bcmfp(instance, SolveOptions{.engine = Engine::PerFlow}, &stats);
    res.queries = stats.tables_built;
    return res;
  }

  const auto tree = decompose(g);
  const Rational& eps_prime = res.params.epsilon_prime;
  const Flow R = res.params.target_r;
  auto ask = [&](std::size_t j) {
    auto caps = scale_capacities(g, ladder_level(eps_prime, j), eps_prime);
    auto ans = feasible(tree, g, budget, R, caps);
    ++res.queries;
    res.max_query_entries = std::max(res.max_query_entries, ans.entries);
    return ans;
  };

  res.ladder_top = ladder_top(eps_prime, res.max_flow);
  auto best = ask(0);
  if (!best.yes) {
    // M = 1 fails only when OPT < 1 + eps' <= 2; settle OPT in {0, 1} exactly.
    res.mode = FptasResult::Mode::SmallOptimum;
    auto one = feasible(tree, g, budget, 1);
    ++res.queries;
    res.solution = make_solution(g, one.yes ? one.edges : std::vector<EdgeIndex>{});
    return res;
  }

  // Answers are YES up to some rung and NO above it: larger M only shrinks
  // the scaled capacities.
  std::size_t lo = 0, hi = res.ladder_top;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    auto ans = ask(mid);
    if (ans.yes) {
      lo = mid;
      best = std::move(ans);
    } else {
      hi = mid - 1;
    }
  }
  res.mode = FptasResult::Mode::Scaled;
  res.chosen = ladder_level(eps_prime, lo);
  res.solution = make_solution(g, std::move(best.edges));
  return res;
}

}  // namespace spnd
