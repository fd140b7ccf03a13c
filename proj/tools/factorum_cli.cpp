// factorum: command-line front end for the solver and its verification suites.
//
// Exit codes: 0 success / optimum, 2 no factor or rejected input factor,
// 1 usage or parse error, 3 internal invariant failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "factorum/factorum.hpp"

namespace {

using namespace factorum;
using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNo = 2;
constexpr int kInternal = 3;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FACTORUM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("FACTORUM_SEED is not an integer: '") + env + "'");
    }
  }
  return 1;
}

json edges_json(const Instance& inst, const EdgeSet& s) {
  json arr = json::array();
  for (EdgeId e : s.ids()) arr.push_back({inst.graph().edge(e).a, inst.graph().edge(e).b});
  return arr;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string path;
  std::string oracle = "matching";
  bool stats = false;
  bool trace = false;
  bool as_json = false;
  std::string dot;
  std::optional<std::uint64_t> seed;
};

int cmd_solve(const SolveArgs& a) {
  const Instance inst = read_instance_file(a.path);
  (void)resolve_seed(a.seed);  // solving is deterministic; accepted for uniformity
  if (!a.dot.empty()) {
    std::ofstream out(a.dot);
    if (!out) throw UsageError("cannot write '" + a.dot + "'");
    out << to_dot(inst);
  }
  SolveOptions opt;
  opt.trace = a.trace;
  const SolveResult res = main_solve(inst, a.oracle, opt);

  if (a.as_json) {
    json j;
    j["status"] = res.outcome ? "optimum" : "no";
    if (res.outcome) {
      j["weight"] = to_string(res.outcome->weight);
      j["edges"] = edges_json(inst, res.outcome->edges);
    }
    if (a.stats)
      j["stats"] = {{"dec_calls", res.stats.dec_calls},
                    {"opt_calls", res.stats.opt_calls},
                    {"comparisons", res.stats.comparisons},
                    {"recursion_depth", res.stats.recursion_depth},
                    {"wall_time_ms", res.stats.wall_time.count() / 1e6}};
    if (a.trace) {
      json t = json::array();
      for (const auto& e : res.trace) {
        json row{{"level", e.level}, {"branch", to_string(e.branch)}};
        if (e.u) row["u"] = *e.u;
        if (e.v) row["v"] = *e.v;
        if (e.incumbent) row["incumbent"] = to_string(*e.incumbent);
        t.push_back(row);
      }
      j["trace"] = t;
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << format_factor(inst, res.outcome);
    if (a.stats) {
      std::cout << "stat dec_calls " << res.stats.dec_calls << '\n'
                << "stat opt_calls " << res.stats.opt_calls << '\n'
                << "stat comparisons " << res.stats.comparisons << '\n'
                << "stat recursion_depth " << res.stats.recursion_depth << '\n'
                << "stat wall_time_ms " << res.stats.wall_time.count() / 1e6 << '\n';
    }
    if (a.trace) {
      for (const auto& e : res.trace) {
        std::cout << "trace level=" << e.level << " branch=" << to_string(e.branch);
        if (e.u) std::cout << " u=" << *e.u;
        if (e.v) std::cout << " v=" << *e.v;
        if (e.incumbent) std::cout << " incumbent=" << to_string(*e.incumbent);
        std::cout << '\n';
      }
    }
  }
  return res.outcome ? kOk : kNo;
}

// ---------------------------------------------------------------- check

int cmd_check(const std::string& inst_path, const std::string& factor_path) {
  const Instance inst = read_instance_file(inst_path);
  const FactorRecord rec = read_factor_file(factor_path);
  if (!rec.feasible) {
    auto best = brute_force_opt(inst);
    if (best) {
      std::cout << "rejected: file claims no factor, but one exists\n";
      return kNo;
    }
    std::cout << "ok: no factor\n";
    return kOk;
  }
  const EdgeSet s = to_edge_set(inst, rec);
  if (auto v = first_violation(inst, s)) {
    std::cout << "rejected: vertex " << *v << " has degree " << degree_in(inst.graph(), s, *v)
              << ", allowed " << to_string(inst.constraint(*v)) << '\n';
    return kNo;
  }
  const Rational w = inst.weight_of(s);
  if (!rec.weight) {
    std::cout << "rejected: missing weight line\n";
    return kNo;
  }
  if (*rec.weight != w) {
    std::cout << "rejected: stated weight " << to_string(*rec.weight) << ", actual weight "
              << to_string(w) << '\n';
    return kNo;
  }
  std::cout << "ok: factor with " << s.size() << " edges, weight " << to_string(w) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- terminal backup

int cmd_terminal_backup(const std::string& path, bool solve, const std::string& oracle) {
  const TerminalBackup tb = parse_terminal_backup(io_detail::read_file(path));
  const BackupConversion conv = terminal_backup_to_instance(tb);
  if (!conv.instance) {
    for (VertexId v : conv.isolated_terminals)
      std::cerr << "warning: terminal " << v << " has no incident edge; infeasible\n";
    std::cout << "status no\nNo\n";
    return kNo;
  }
  if (!solve) {
    std::cout << serialize_instance(*conv.instance);
    return kOk;
  }
  const SolveResult res = main_solve(*conv.instance, oracle);
  std::cout << format_factor(*conv.instance, res.outcome);
  if (!res.outcome) return kNo;
  std::cout << "cost " << to_string(Rational(-res.outcome->weight)) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::size_t n = 6;
  std::size_t m = 8;
  std::string classes = "all";
  std::string weight_range = "-5:5";
  std::optional<std::uint64_t> seed;
};

int cmd_gen(const GenArgs& a) {
  GenParams p;
  p.n = a.n;
  p.m = a.m;
  p.families = parse_families(a.classes);
  const auto colon = a.weight_range.find(':');
  if (colon == std::string::npos) throw UsageError("--weight-range expects lo:hi");
  try {
    p.weight_lo = std::stoll(a.weight_range.substr(0, colon));
    p.weight_hi = std::stoll(a.weight_range.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--weight-range expects integers lo:hi");
  }
  std::cout << serialize_instance(random_instance(resolve_seed(a.seed), p));
  return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, std::optional<std::uint64_t> seed, std::size_t cases,
               bool as_json) {
  SweepConfig cfg;
  cfg.seed = resolve_seed(seed);
  cfg.cases = cases;
  const auto results = run_suite(suite, cfg);
  bool ok = true;
  json j = json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (as_json) {
      j.push_back({{"name", r.name},
                   {"passed", r.passed},
                   {"cases", r.cases},
                   {"detail", r.detail},
                   {"failing_seeds", r.failing_seeds},
                   {"seconds", r.seconds}});
    } else {
      std::cout << format_result(r) << '\n';
    }
  }
  if (as_json) std::cout << j.dump(2) << '\n';
  return ok ? kOk : kInternal;
}

// ---------------------------------------------------------------- matching / reduce

int cmd_matching(const std::string& path) {
  const MatchingProblem p = parse_edge_list(io_detail::read_file(path));
  auto m = max_weight_perfect_matching(p);
  if (!m) {
    std::cout << "status no\nNo\n";
    return kNo;
  }
  std::cout << "status optimum\nweight " << to_string(m->weight) << "\nedge_count "
            << m->edges.size() << '\n';
  for (EdgeId e : m->edges.ids())
    std::cout << "e " << p.graph.edge(e).a << ' ' << p.graph.edge(e).b << '\n';
  return kOk;
}

int cmd_reduce(const std::string& path) {
  const Instance inst = read_instance_file(path);
  const ReducedGraph r = reduce_instance(inst);
  for (EdgeId e = 0; e < inst.edge_count(); ++e)
    std::cout << "# edge " << e << " middle " << r.connector[e].first << ' '
              << r.connector[e].second << '\n';
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    std::cout << "# gadget " << v << ':';
    for (VertexId x : r.gadget_vertices[v]) std::cout << ' ' << x;
    std::cout << '\n';
  }
  std::cout << serialize_edge_list(r.problem.graph, r.problem.weights);
  return kOk;
}

// ---------------------------------------------------------------- gadget

int cmd_gadget(const std::string& kind, const std::vector<std::string>& args) {
  auto num = [](const std::string& s) {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(s, &used);
      if (used != s.size() || v > DegreeConstraint::kMaxArity) throw std::invalid_argument(s);
      return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw UsageError("expected a small nonnegative integer, got '" + s + "'");
    }
  };
  if (kind == "interval" || kind == "parity") {
    if (args.size() != 3) throw UsageError("gadget " + kind + " expects g f d");
    const unsigned g = num(args[0]);
    const unsigned f = num(args[1]);
    const unsigned d = num(args[2]);
    const GadgetBlueprint gb =
        kind == "interval" ? build_interval_gadget(g, f, d) : build_parity_gadget(g, f, d);
    std::cout << "stubs " << gb.stub_count << '\n';
    for (std::size_t i = 0; i < gb.internal.size(); ++i)
      std::cout << "internal " << gb.stub_count + i << ' '
                << (gb.internal[i] == GadgetLabel::Required ? "{1}" : "{0,1}") << '\n';
    for (const auto& e : gb.edges) std::cout << "e " << e.a << ' ' << e.b << '\n';
    std::cout << "modeled " << to_string(gb.modeled) << '\n';
    std::cout << "realized " << to_string(realized_set(gb)) << '\n';
    return kOk;
  }
  if (kind == "obstruction") {
    if (args.size() != 2) throw UsageError("gadget obstruction expects <values> <arity>");
    auto spec = parse_constraint_spec({"set", args[0]}, 1);
    const DegreeConstraint d = spec.materialize(num(args[1]));
    std::cout << to_string(d) << ' ' << to_string(obstruction_check(d)) << '\n';
    return kOk;
  }
  throw UsageError("gadget kind must be interval, parity or obstruction");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted general factor solver for interval, parity, type-1 and type-2 constraints"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an instance file");
  s->add_option("instance", solve.path, "Instance file")->required();
  s->add_option("--oracle", solve.oracle, "matching or brute")
      ->check(CLI::IsMember({"matching", "brute"}));
  s->add_flag("--stats", solve.stats, "Print call counts and timing");
  s->add_flag("--trace", solve.trace, "Print the branch trace");
  s->add_flag("--json", solve.as_json, "JSON output");
  s->add_option("--dot", solve.dot, "Also write the instance as DOT to this path");
  s->add_option("--seed", solve.seed, "Seed (falls back to FACTORUM_SEED)");

  std::string check_inst;
  std::string check_factor;
  auto* c = app.add_subcommand("check", "Validate a factor file against an instance");
  c->add_option("instance", check_inst)->required();
  c->add_option("factor", check_factor)->required();

  std::string tb_path;
  bool tb_solve = false;
  std::string tb_oracle = "matching";
  auto* t = app.add_subcommand("terminal-backup", "Convert (and optionally solve) a terminal backup file");
  t->add_option("file", tb_path)->required();
  t->add_flag("--solve", tb_solve, "Solve and report the cost");
  t->add_option("--oracle", tb_oracle)->check(CLI::IsMember({"matching", "brute"}));

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random admissible instance");
  g->add_option("--n", gen.n, "Vertices");
  g->add_option("--m", gen.m, "Edges");
  g->add_option("--classes", gen.classes, "interval,parity,type1,type2 or all");
  g->add_option("--weight-range", gen.weight_range, "lo:hi");
  g->add_option("--seed", gen.seed, "Seed (falls back to FACTORUM_SEED)");

  std::string suite = "all";
  std::optional<std::uint64_t> verify_seed;
  std::size_t verify_cases = 0;
  bool verify_json = false;
  auto* v = app.add_subcommand("verify", "Run the property suites");
  v->add_option("--suite", suite)->check(
      CLI::IsMember({"solver", "structural", "gadgets", "matching", "all"}));
  v->add_option("--seed", verify_seed, "Seed (falls back to FACTORUM_SEED)");
  v->add_option("--cases", verify_cases, "Cases per sweep (0 = default)");
  v->add_flag("--json", verify_json);

  std::string matching_path;
  auto* m = app.add_subcommand("matching", "Maximum-weight perfect matching of an edge list");
  m->add_option("file", matching_path)->required();

  std::string reduce_path;
  auto* r = app.add_subcommand("reduce", "Print the matching graph an instance reduces to");
  r->add_option("instance", reduce_path)->required();

  std::string gadget_kind;
  std::vector<std::string> gadget_args;
  auto* ga = app.add_subcommand("gadget", "Build a gadget and report its realized set");
  ga->add_option("kind", gadget_kind, "interval, parity or obstruction")->required();
  ga->add_option("args", gadget_args, "g f d, or <values> <arity>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*c) return cmd_check(check_inst, check_factor);
    if (*t) return cmd_terminal_backup(tb_path, tb_solve, tb_oracle);
    if (*g) return cmd_gen(gen);
    if (*v) return cmd_verify(suite, verify_seed, verify_cases, verify_json);
    if (*m) return cmd_matching(matching_path);
    if (*r) return cmd_reduce(reduce_path);
    if (*ga) return cmd_gadget(gadget_kind, gadget_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
