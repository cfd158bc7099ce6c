#include "spnd/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <iomanip>
#include <optional>
#include <sstream>

#include "spnd/decompose.hpp"
#include "spnd/dp.hpp"
#include "spnd/fptas.hpp"
#include "spnd/generator.hpp"
#include "spnd/lattice.hpp"
#include "spnd/oracle.hpp"
#include "spnd/upgrade.hpp"

namespace spnd::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string instance_path;
  std::string problem;  // empty: take it from the instance file
  std::string format = "text";
  std::string engine = "table";
  std::vector<Flow> lattice;
  std::optional<std::int64_t> lattice_k;
  std::string epsilon;
  std::vector<std::string> edges;
  // gen / sweep
  std::uint64_t seed = 1;
  std::string seeds = "1..20";
  std::size_t edge_count = 8;
  Flow cap_max = 6;
  Cost cost_max = 10;
  Flow cap_scale = 1;
  bool states = false;
};

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::string format_ms(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << ms;
  return os.str();
}

ProblemKind parse_problem(const std::string& s) {
  auto k = problem_kind_from_string(s);
  if (!k) throw UsageError("unknown problem '" + s + "' (expected bcmfp or capndp)");
  return *k;
}

ProblemInstance load(const Config& c) {
  auto inst = load_instance(c.instance_path);
  if (!c.problem.empty() && parse_problem(c.problem) != inst.objective.kind)
    throw UsageError("--problem " + c.problem + " contradicts the instance objective (" +
                     std::string(to_string(inst.objective.kind)) + ")");
  return inst;
}

/// Final answer in terms of the input file's edge ids.
struct Report {
  Cost cost = 0;
  Flow flow = 0;
  std::vector<std::string> edges;  // sorted
  std::vector<GadgetDecision> upgrades;
};

Report report_plain(const MultiGraph& g, const Solution& s) {
  return Report{s.total_cost, s.achieved_flow, sorted_ids(g, s.purchased), {}};
}

Report report_expanded(const Expansion& ex, const Solution& s, std::ostream& err) {
  auto mapped = map_back(ex.instance, ex.map, s);
  for (const auto& w : mapped.warnings) err << "WARNING " << w << '\n';
  Report r;
  r.cost = mapped.cost;
  r.flow = mapped.flow;
  for (EdgeIndex e : s.purchased)
    if (e < ex.map.plain_edges) r.edges.push_back(ex.instance.graph.edge(e).id);
  for (const auto& d : mapped.decisions)
    if (d.choice != 0) r.edges.push_back(d.id);
  std::sort(r.edges.begin(), r.edges.end());
  r.upgrades = std::move(mapped.decisions);
  return r;
}

void print_report(const Report& r, ProblemKind kind, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << "problem,cost,flow,edges\n";
    out << to_string(kind) << ',' << r.cost << ',' << r.flow << ',' << join(r.edges, ';') << '\n';
    return;
  }
  out << "problem: " << to_string(kind) << '\n';
  out << "purchased: " << join(r.edges, ' ') << '\n';
  out << "cost: " << r.cost << '\n';
  out << "flow: " << r.flow << '\n';
  for (const auto& d : r.upgrades) out << "UPGRADE " << d.id << " choice=" << d.choice << '\n';
  out << "RESULT cost=" << r.cost << " flow=" << r.flow << " edges=" << join(r.edges, ',') << '\n';
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "WARNING " << w << '\n';
}

int cmd_decompose(const Config& c, std::ostream& out, std::ostream& err) {
  auto inst = load(c);
  if (!inst.upgrades.empty()) {
    auto ex = expand_upgrades(inst);
    print_warnings(ex.map.warnings, err);
    inst = std::move(ex.instance);
  }
  out << decompose(inst.graph).to_string() << '\n';
  return kOk;
}

Solution solve_exact(const ProblemInstance& inst, const Config& c, std::ostream& err) {
  if (!c.lattice.empty()) {
    LatticeSpec spec{c.lattice, *c.lattice_k};
    LatticeStats stats;
    auto sol = solve_lattice(inst, spec, &stats);
    print_warnings(stats.warnings, err);
    return sol;
  }
  SolveOptions opts;
  opts.engine = c.engine == "per-flow" ? Engine::PerFlow : Engine::Table;
  return inst.objective.kind == ProblemKind::CapNdp ? solve_capndp(inst, opts) : solve_bcmfp(inst, opts);
}

int cmd_solve(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.lattice_k && c.lattice.empty()) throw UsageError("--K requires --lattice");
  if (!c.lattice.empty() && !c.lattice_k) throw UsageError("--lattice requires --K");
  if (!c.lattice.empty() && c.engine != "table") throw UsageError("--lattice cannot be combined with --engine");
  auto inst = load(c);
  if (inst.upgrades.empty()) {
    print_report(report_plain(inst.graph, solve_exact(inst, c, err)), inst.objective.kind, c.format, out);
    return kOk;
  }
  auto ex = expand_upgrades(inst);
  print_warnings(ex.map.warnings, err);
  auto sol = solve_exact(ex.instance, c, err);
  print_report(report_expanded(ex, sol, err), inst.objective.kind, c.format, out);
  return kOk;
}

int cmd_fptas(const Config& c, std::ostream& out, std::ostream& err) {
  Rational eps(1);
  try {
    eps = Rational::parse(c.epsilon);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (eps.num() <= 0) throw UsageError("--epsilon must be positive");
  auto inst = load(c);
  if (inst.objective.kind != ProblemKind::Bcmfp) throw UsageError("fptas needs a budget (bcmfp) instance");

  std::optional<Expansion> ex;
  const ProblemInstance* work = &inst;
  if (!inst.upgrades.empty()) {
    ex = expand_upgrades(inst);
    print_warnings(ex->map.warnings, err);
    work = &ex->instance;
  }
  auto res = fptas_bcmfp(*work, eps);
  Report r = ex ? report_expanded(*ex, res.solution, err) : report_plain(work->graph, res.solution);

  if (res.chosen) {
    std::ostringstream m;
    m << std::setprecision(10) << res.chosen->approx();
    out << "M_PRIME=" << m.str() << '\n';
  } else {
    out << "M_PRIME=exact\n";
  }
  out << "GUARANTEE flow*(1+eps) >= OPT\n";
  print_report(r, inst.objective.kind, c.format, out);
  return kOk;
}

int cmd_oracle(const Config& c, std::ostream& out, std::ostream& err) {
  auto inst = load(c);
  if (inst.upgrades.empty()) {
    auto sol = inst.objective.kind == ProblemKind::CapNdp ? oracle_capndp(inst) : oracle_bcmfp(inst);
    print_report(report_plain(inst.graph, sol), inst.objective.kind, c.format, out);
    return kOk;
  }
  auto ex = expand_upgrades(inst);
  print_warnings(ex.map.warnings, err);
  const auto& w = ex.instance;
  auto sol = w.objective.kind == ProblemKind::CapNdp ? oracle_capndp(w) : oracle_bcmfp(w);
  print_report(report_expanded(ex, sol, err), inst.objective.kind, c.format, out);
  return kOk;
}

int cmd_gen(const Config& c, std::ostream& out) {
  GeneratorParams p{c.seed, c.edge_count, c.cap_max, c.cost_max, parse_problem(c.problem.empty() ? "bcmfp" : c.problem),
                    c.cap_scale};
  try {
    out << write_instance(generate_sp(p));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kOk;
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  auto inst = load(c);
  if (!inst.upgrades.empty()) {
    auto ex = expand_upgrades(inst);
    print_warnings(ex.map.warnings, err);
    inst = std::move(ex.instance);
  }
  std::vector<std::string> ids;
  for (const auto& id : c.edges)
    if (!id.empty()) ids.push_back(id);
  std::vector<EdgeIndex> edges;
  try {
    edges = resolve_edge_ids(inst.graph, ids);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto sol = make_solution(inst.graph, std::move(edges));
  auto rep = verify_solution(inst, sol);
  for (const auto& ch : rep.checks)
    out << "CHECK " << ch.name << ' ' << (ch.passed ? "PASS" : "FAIL") << (ch.detail.empty() ? "" : " ") << ch.detail
        << '\n';
  out << "RESULT cost=" << rep.cost << " flow=" << rep.flow << " edges=" << join(sorted_ids(inst.graph, sol.purchased), ',')
      << '\n';
  if (!rep.passed()) {
    err << "ERROR " << kInfeasible << " solution does not meet the objective\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_sweep(const Config& c, std::ostream& out) {
  if (c.format != "csv") throw UsageError("sweep only writes csv");
  const ProblemKind kind = parse_problem(c.problem.empty() ? "bcmfp" : c.problem);
  auto seeds = parse_seed_range(c.seeds);
  out << "seed,m,F,opt_cost,opt_flow,dp_ms,oracle_ms,match" << (c.states ? ",states" : "") << '\n';
  for (auto seed : seeds) {
    GeneratorParams p{seed, c.edge_count, c.cap_max, c.cost_max, kind, c.cap_scale};
    std::ostringstream row;
    try {
      auto inst = generate_sp(p);
      SolveStats stats;
      auto t0 = std::chrono::steady_clock::now();
      auto dp = kind == ProblemKind::CapNdp ? solve_capndp(inst, {}, &stats) : solve_bcmfp(inst, {}, &stats);
      double dp_ms = elapsed_ms(t0);
      row << seed << ',' << inst.graph.edge_count() << ',' << stats.f << ',' << dp.total_cost << ','
          << dp.achieved_flow << ',' << format_ms(dp_ms) << ',';
      if (inst.graph.edge_count() <= kOracleMaxEdges) {
        t0 = std::chrono::steady_clock::now();
        auto ref = kind == ProblemKind::CapNdp ? oracle_capndp(inst) : oracle_bcmfp(inst);
        double oracle_ms = elapsed_ms(t0);
        bool match = dp.total_cost == ref.total_cost &&
                     (kind == ProblemKind::CapNdp ? dp.achieved_flow >= inst.demand()
                                                  : dp.achieved_flow == ref.achieved_flow);
        row << format_ms(oracle_ms) << ',' << (match ? 1 : 0);
      } else {
        row << ",";
      }
      if (c.states) row << ',' << stats.entries;
    } catch (const std::exception& e) {
      row.str("");
      row << seed << ",,,,,,,0" << (c.states ? "," : "");
    }
    out << row.str() << '\n';
  }
  return kOk;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      throw std::invalid_argument("bad seed range '" + text + "'");
    return std::stoull(s);
  };
  std::vector<std::uint64_t> out;
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    out.push_back(number(text));
    return out;
  }
  auto lo = number(text.substr(0, dots)), hi = number(text.substr(dots + 2));
  for (auto s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Series-parallel network design solver", "spnd"};
  app.require_subcommand(1);
  Config c;

  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--problem", c.problem, "bcmfp or capndp")->check(CLI::IsMember({"bcmfp", "capndp"}));
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  };
  auto add_file = [&](CLI::App* sub) { sub->add_option("instance", c.instance_path, "instance file")->required(); };

  auto* decompose_cmd = app.add_subcommand("decompose", "print the decomposition tree");
  add_file(decompose_cmd);

  auto* solve = app.add_subcommand("solve", "exact DP solve");
  add_file(solve);
  add_problem(solve);
  add_format(solve);
  solve->add_option("--engine", c.engine, "table or per-flow")->check(CLI::IsMember({"table", "per-flow"}));
  solve->add_option("--lattice", c.lattice, "lattice basis d1,d2,...")->delimiter(',');
  solve->add_option("--K", c.lattice_k, "lattice coefficient bound");

  auto* fptas = app.add_subcommand("fptas", "approximate BCMFP");
  add_file(fptas);
  add_format(fptas);
  fptas->add_option("--epsilon", c.epsilon, "p/q or decimal")->required();

  auto* oracle = app.add_subcommand("oracle", "exhaustive search");
  add_file(oracle);
  add_problem(oracle);
  add_format(oracle);

  auto* gen = app.add_subcommand("gen", "write a random instance");
  gen->add_option("--seed", c.seed);
  gen->add_option("--edges", c.edge_count)->check(CLI::PositiveNumber);
  gen->add_option("--cap-max", c.cap_max)->check(CLI::PositiveNumber);
  gen->add_option("--cost-max", c.cost_max)->check(CLI::NonNegativeNumber);
  gen->add_option("--cap-scale", c.cap_scale)->check(CLI::PositiveNumber);
  add_problem(gen);

  auto* verify = app.add_subcommand("verify", "check an edge set against the objective");
  add_file(verify);
  verify->add_option("--edges", c.edges, "purchased edge ids")->delimiter(',')->required()->expected(0, -1);

  auto* sweep = app.add_subcommand("sweep", "DP vs oracle over generated instances");
  sweep->add_option("--seeds", c.seeds, "a..b");
  sweep->add_option("--edges", c.edge_count)->check(CLI::PositiveNumber);
  sweep->add_option("--cap-max", c.cap_max)->check(CLI::PositiveNumber);
  sweep->add_option("--cost-max", c.cost_max)->check(CLI::NonNegativeNumber);
  sweep->add_option("--cap-scale", c.cap_scale)->check(CLI::PositiveNumber);
  sweep->add_flag("--states", c.states, "append the DP table size");
  add_problem(sweep);
  sweep->add_option("--format", c.format)->check(CLI::IsMember({"csv"}));
  c.format = "text";

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (sweep->parsed() && sweep->count("--format") == 0) c.format = "csv";

    if (decompose_cmd->parsed()) return cmd_decompose(c, out, err);
    if (solve->parsed()) return cmd_solve(c, out, err);
    if (fptas->parsed()) return cmd_fptas(c, out, err);
    if (oracle->parsed()) return cmd_oracle(c, out, err);
    if (gen->parsed()) return cmd_gen(c, out);
    if (verify->parsed()) return cmd_verify(c, out, err);
    if (sweep->parsed()) return cmd_sweep(c, out);
    throw UsageError("no command");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "ERROR " << kUsage << ' ' << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "ERROR " << kUsage << ' ' << c.instance_path << ':' << e.line() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const NotSeriesParallel& e) {
    err << "ERROR " << kNotSeriesParallel << ' ' << e.what() << '\n';
    if (!e.witness().empty()) err << "WITNESS " << e.witness() << '\n';
    return kNotSeriesParallel;
  } catch (const InfeasibleDemand& e) {
    err << "ERROR " << kInfeasible << ' ' << e.what() << '\n';
    return kInfeasible;
  } catch (const UsageError& e) {
    err << "ERROR " << kUsage << ' ' << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "ERROR " << kUsage << ' ' << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "ERROR " << kUsage << ' ' << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace spnd::cli
