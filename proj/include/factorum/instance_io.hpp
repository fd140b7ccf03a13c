#pragma once

// Text formats: instance files, factor files, terminal-backup files, plain
// edge lists, and a DOT dump.
//
//   vertices <n>
//   v <id> interval <g> <f> | parity <g> <f> | set <d1>,<d2>,...
//   e <a> <b> <weight>
//
// Constraint arity is the final degree of the vertex.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factorum/degree_constraint.hpp"
#include "factorum/error.hpp"
#include "factorum/graph.hpp"
#include "factorum/instance.hpp"
#include "factorum/matching.hpp"
#include "factorum/rational.hpp"

namespace factorum {

namespace io_detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

// Non-empty lines with `#` comments stripped.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string raw(text.substr(pos, end - pos));
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream in(raw);
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline std::size_t parse_count(const Line& line, const std::string& tok, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line.number, std::string("expected a nonnegative integer for ") + what +
                                      ", got '" + tok + "'");
  try {
    return static_cast<std::size_t>(std::stoull(tok));
  } catch (const std::out_of_range&) {
    throw ParseError(line.number, std::string(what) + " out of range");
  }
}

inline Rational parse_weight(const Line& line, const std::string& tok) {
  auto w = parse_rational(tok);
  if (!w) throw ParseError(line.number, "malformed weight '" + tok + "'");
  return *w;
}

inline void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n)
    throw ParseError(line.number, "'" + line.tokens[0] + "' expects " + std::to_string(n - 1) +
                                      " argument(s), got " +
                                      std::to_string(line.tokens.size() - 1));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace io_detail

// ---------------------------------------------------------------- constraints

/// Spec as written in a file, before the arity is known.
struct ConstraintSpec {
  enum class Kind { Interval, Parity, Set } kind = Kind::Set;
  unsigned g = 0;
  unsigned f = 0;
  std::vector<unsigned> values;

  DegreeConstraint materialize(unsigned arity) const {
    switch (kind) {
      case Kind::Interval: return DegreeConstraint::range(arity, g, f);
      case Kind::Parity: return DegreeConstraint::range(arity, g, f, 2);
      case Kind::Set: {
        std::uint64_t mask = 0;
        for (unsigned x : values) mask |= DegreeConstraint::bit(x);
        return DegreeConstraint(arity, mask);
      }
    }
    throw InternalError("unknown constraint kind");
  }
};

/// `interval g f`, `parity g f` or `set d1,d2,...` as tokens.
inline ConstraintSpec parse_constraint_spec(const std::vector<std::string>& tok, std::size_t line) {
  io_detail::Line l{line, tok};
  if (tok.empty()) throw ParseError(line, "missing constraint");
  ConstraintSpec s;
  auto small = [&](const std::string& t) {
    auto x = io_detail::parse_count(l, t, "constraint value");
    if (x > DegreeConstraint::kMaxArity) throw ParseError(line, "constraint value too large");
    return static_cast<unsigned>(x);
  };
  if (tok[0] == "interval" || tok[0] == "parity") {
    if (tok.size() != 3) throw ParseError(line, "'" + tok[0] + "' expects g f");
    s.kind = tok[0] == "interval" ? ConstraintSpec::Kind::Interval : ConstraintSpec::Kind::Parity;
    s.g = small(tok[1]);
    s.f = small(tok[2]);
    if (s.g > s.f) throw ParseError(line, "constraint needs g <= f");
    if (s.kind == ConstraintSpec::Kind::Parity && (s.f - s.g) % 2 != 0)
      throw ParseError(line, "parity constraint needs f - g even");
    return s;
  }
  if (tok[0] == "set") {
    if (tok.size() != 2) throw ParseError(line, "'set' expects a comma-separated list");
    std::string_view rest = tok[1];
    while (true) {
      auto comma = rest.find(',');
      s.values.push_back(small(std::string(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return s;
  }
  throw ParseError(line, "unknown constraint kind '" + tok[0] + "'");
}

/// Canonical spelling: interval, else parity interval, else an explicit set.
inline std::string constraint_spec(const DegreeConstraint& d) {
  const auto cls = classify(d);
  if (cls.is_interval) return "interval " + std::to_string(d.min()) + " " + std::to_string(d.max());
  if (cls.is_parity_interval)
    return "parity " + std::to_string(d.min()) + " " + std::to_string(d.max());
  std::string out = "set ";
  bool first = true;
  for (unsigned x : d.values()) {
    if (!first) out += ',';
    out += std::to_string(x);
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- instances

inline Instance parse_instance(std::string_view text) {
  using io_detail::Line;
  auto lines = io_detail::tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "vertices")
    throw ParseError(lines.empty() ? 1 : lines[0].number, "expected 'vertices <n>' first");
  io_detail::expect_arity(lines[0], 2);
  const std::size_t n = io_detail::parse_count(lines[0], lines[0].tokens[1], "vertex count");

  std::vector<std::optional<ConstraintSpec>> specs(n);
  std::vector<std::size_t> spec_line(n, 0);
  std::vector<Endpoints> edges;
  std::vector<Rational> weights;
  std::vector<std::size_t> edge_line;
  std::vector<std::vector<VertexId>> nbrs(n);

  auto vertex = [&](const Line& l, const std::string& t) {
    auto v = io_detail::parse_count(l, t, "vertex id");
    if (v >= n) throw ParseError(l.number, "vertex " + t + " out of range");
    return static_cast<VertexId>(v);
  };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const std::string& kw = l.tokens[0];
    if (kw == "vertices") throw ParseError(l.number, "duplicate 'vertices' line");
    if (kw == "v") {
      if (l.tokens.size() < 3) throw ParseError(l.number, "'v' expects <id> <constraint>");
      VertexId v = vertex(l, l.tokens[1]);
      if (specs[v]) throw ParseError(l.number, "second constraint for vertex " + l.tokens[1]);
      specs[v] = parse_constraint_spec({l.tokens.begin() + 2, l.tokens.end()}, l.number);
      spec_line[v] = l.number;
    } else if (kw == "e") {
      io_detail::expect_arity(l, 4);
      VertexId a = vertex(l, l.tokens[1]);
      VertexId b = vertex(l, l.tokens[2]);
      if (!specs[a] || !specs[b])
        throw ParseError(l.number, "edge uses vertex " + (specs[a] ? l.tokens[2] : l.tokens[1]) +
                                       " before its 'v' line");
      if (a == b) throw ParseError(l.number, "self-loop at vertex " + l.tokens[1]);
      if (std::find(nbrs[a].begin(), nbrs[a].end(), b) != nbrs[a].end())
        throw ParseError(l.number, "duplicate edge " + l.tokens[1] + " " + l.tokens[2]);
      nbrs[a].push_back(b);
      nbrs[b].push_back(a);
      edges.push_back({a, b});
      weights.push_back(io_detail::parse_weight(l, l.tokens[3]));
      edge_line.push_back(l.number);
    } else {
      throw ParseError(l.number, "unknown keyword '" + kw + "'");
    }
  }

  std::vector<DegreeConstraint> cs;
  for (VertexId v = 0; v < n; ++v) {
    if (!specs[v])
      throw ParseError(lines.back().number, "vertex " + std::to_string(v) + " has no 'v' line");
    const auto deg = static_cast<unsigned>(nbrs[v].size());
    try {
      cs.push_back(specs[v]->materialize(deg));
    } catch (const UsageError& e) {
      throw ParseError(spec_line[v], "constraint of vertex " + std::to_string(v) + " (degree " +
                                         std::to_string(deg) + "): " + e.what());
    }
  }
  return Instance(Graph(n, edges), std::move(cs), std::move(weights));
}

inline Instance read_instance_file(const std::string& path) {
  return parse_instance(io_detail::read_file(path));
}

inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  const Graph& g = inst.graph();
  out << "vertices " << g.vertex_count() << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    out << "v " << v << ' ' << constraint_spec(inst.constraint(v)) << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out << "e " << g.edge(e).a << ' ' << g.edge(e).b << ' ' << to_string(inst.weight(e)) << '\n';
  return out.str();
}

// ---------------------------------------------------------------- factors

/// What a factor file states: `status optimum|no`, `weight w`, `e a b` lines.
/// `stat`, `trace` and `edge_count` lines are informational.
struct FactorRecord {
  bool feasible = true;
  std::optional<Rational> weight;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::size_t> edge_lines;
};

inline FactorRecord parse_factor(std::string_view text) {
  FactorRecord r;
  for (const auto& l : io_detail::tokenize(text)) {
    const std::string& kw = l.tokens[0];
    if (kw == "status") {
      io_detail::expect_arity(l, 2);
      if (l.tokens[1] == "optimum") r.feasible = true;
      else if (l.tokens[1] == "no" || l.tokens[1] == "No") r.feasible = false;
      else throw ParseError(l.number, "unknown status '" + l.tokens[1] + "'");
    } else if (kw == "No") {
      r.feasible = false;
    } else if (kw == "weight") {
      io_detail::expect_arity(l, 2);
      r.weight = io_detail::parse_weight(l, l.tokens[1]);
    } else if (kw == "e") {
      if (l.tokens.size() != 3) throw ParseError(l.number, "'e' expects <a> <b>");
      r.edges.push_back({io_detail::parse_count(l, l.tokens[1], "vertex id"),
                         io_detail::parse_count(l, l.tokens[2], "vertex id")});
      r.edge_lines.push_back(l.number);
    } else if (kw != "stat" && kw != "trace" && kw != "edge_count") {
      throw ParseError(l.number, "unknown keyword '" + kw + "'");
    }
  }
  return r;
}

inline FactorRecord read_factor_file(const std::string& path) {
  return parse_factor(io_detail::read_file(path));
}

/// The edge set a record names; every edge must exist in the instance.
inline EdgeSet to_edge_set(const Instance& inst, const FactorRecord& r) {
  EdgeSet s(inst.graph());
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    const auto [a, b] = r.edges[i];
    auto e = a < inst.vertex_count() && b < inst.vertex_count() ? inst.graph().find_edge(a, b)
                                                                 : std::nullopt;
    if (!e)
      throw ParseError(r.edge_lines[i], "no edge " + std::to_string(a) + " " + std::to_string(b) +
                                            " in the instance");
    if (s.contains(*e))
      throw ParseError(r.edge_lines[i], "edge listed twice");
    s.insert(*e);
  }
  return s;
}

/// `status optimum`, `weight`, `edge_count`, then `e a b` per edge; or `No`.
inline std::string format_factor(const Instance& inst, const std::optional<Factor>& f) {
  if (!f) return "status no\nNo\n";
  std::ostringstream out;
  out << "status optimum\nweight " << to_string(f->weight) << "\nedge_count " << f->edges.size()
      << '\n';
  for (EdgeId e : f->edges.ids())
    out << "e " << inst.graph().edge(e).a << ' ' << inst.graph().edge(e).b << '\n';
  return out.str();
}

// ---------------------------------------------------------------- terminal backup

struct TerminalBackup {
  Graph graph;
  std::vector<bool> terminal;
  std::vector<Rational> costs;
};

inline TerminalBackup parse_terminal_backup(std::string_view text) {
  auto lines = io_detail::tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "vertices")
    throw ParseError(lines.empty() ? 1 : lines[0].number, "expected 'vertices <n>' first");
  io_detail::expect_arity(lines[0], 2);
  const std::size_t n = io_detail::parse_count(lines[0], lines[0].tokens[1], "vertex count");
  std::vector<bool> terminal(n, false);
  std::vector<Endpoints> edges;
  std::vector<Rational> costs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    auto vertex = [&](const std::string& t) {
      auto v = io_detail::parse_count(l, t, "vertex id");
      if (v >= n) throw ParseError(l.number, "vertex " + t + " out of range");
      return static_cast<VertexId>(v);
    };
    if (l.tokens[0] == "t") {
      io_detail::expect_arity(l, 2);
      VertexId v = vertex(l.tokens[1]);
      if (terminal[v]) throw ParseError(l.number, "terminal listed twice");
      terminal[v] = true;
    } else if (l.tokens[0] == "e") {
      io_detail::expect_arity(l, 4);
      VertexId a = vertex(l.tokens[1]);
      VertexId b = vertex(l.tokens[2]);
      Rational c = io_detail::parse_weight(l, l.tokens[3]);
      if (c < 0) throw ParseError(l.number, "costs must be nonnegative");
      if (a == b) throw ParseError(l.number, "self-loop");
      for (const auto& e : edges)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a))
          throw ParseError(l.number, "duplicate edge");
      edges.push_back({a, b});
      costs.push_back(c);
    } else {
      throw ParseError(l.number, "unknown keyword '" + l.tokens[0] + "'");
    }
  }
  return TerminalBackup{Graph(n, edges), std::move(terminal), std::move(costs)};
}

struct BackupConversion {
  std::optional<Instance> instance;     // empty when a terminal is isolated
  std::vector<VertexId> isolated_terminals;
};

/// Terminals get {1}; other vertices {0,2,3} (degree ≥ 3), {0,2} (degree 2),
/// {0,1} (degree 1), {0} (isolated). Weights are negated costs.
inline BackupConversion terminal_backup_to_instance(const TerminalBackup& tb) {
  BackupConversion out;
  const Graph& g = tb.graph;
  std::vector<DegreeConstraint> cs;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto d = static_cast<unsigned>(g.degree(v));
    if (tb.terminal[v]) {
      if (d == 0) {
        out.isolated_terminals.push_back(v);
        continue;
      }
      cs.push_back(DegreeConstraint::of(d, {1}));
    } else if (d >= 3) {
      cs.push_back(DegreeConstraint::of(d, {0, 2, 3}));
    } else if (d == 2) {
      cs.push_back(DegreeConstraint::of(2, {0, 2}));
    } else if (d == 1) {
      cs.push_back(DegreeConstraint::of(1, {0, 1}));
    } else {
      cs.push_back(DegreeConstraint::of(0, {0}));
    }
  }
  if (!out.isolated_terminals.empty()) return out;
  std::vector<Rational> ws;
  for (const auto& c : tb.costs) ws.push_back(-c);
  out.instance = Instance(tb.graph, std::move(cs), std::move(ws));
  return out;
}

// ---------------------------------------------------------------- edge lists

/// `vertices n` and `e a b w` lines; `v` lines are skipped. Every vertex is
/// treated as required by the matching commands.
inline MatchingProblem parse_edge_list(std::string_view text) {
  auto lines = io_detail::tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "vertices")
    throw ParseError(lines.empty() ? 1 : lines[0].number, "expected 'vertices <n>' first");
  io_detail::expect_arity(lines[0], 2);
  const std::size_t n = io_detail::parse_count(lines[0], lines[0].tokens[1], "vertex count");
  std::vector<Endpoints> edges;
  std::vector<Rational> ws;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] == "v") continue;
    if (l.tokens[0] != "e") throw ParseError(l.number, "unknown keyword '" + l.tokens[0] + "'");
    io_detail::expect_arity(l, 4);
    auto a = io_detail::parse_count(l, l.tokens[1], "vertex id");
    auto b = io_detail::parse_count(l, l.tokens[2], "vertex id");
    if (a >= n || b >= n) throw ParseError(l.number, "vertex out of range");
    edges.push_back({a, b});
    ws.push_back(io_detail::parse_weight(l, l.tokens[3]));
    try {
      Graph probe(n, edges);
    } catch (const UsageError& e) {
      throw ParseError(l.number, e.what());
    }
  }
  return MatchingProblem{Graph(n, edges), std::move(ws)};
}

inline std::string serialize_edge_list(const Graph& g, const std::vector<Rational>& w) {
  std::ostringstream out;
  out << "vertices " << g.vertex_count() << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out << "e " << g.edge(e).a << ' ' << g.edge(e).b << ' ' << to_string(w[e]) << '\n';
  return out.str();
}

/// Plain undirected graph; labels carry constraints and weights.
inline std::string to_dot(const Instance& inst) {
  std::ostringstream out;
  const Graph& g = inst.graph();
  out << "graph instance {\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    out << "  " << v << " [label=\"" << v << " " << to_string(inst.constraint(v)) << "\"];\n";
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out << "  " << g.edge(e).a << " -- " << g.edge(e).b << " [label=\"" << to_string(inst.weight(e))
        << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace factorum
