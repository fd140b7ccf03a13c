#pragma once

#include <atomic>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factorum/degree_constraint.hpp"
#include "factorum/error.hpp"
#include "factorum/graph.hpp"
#include "factorum/instance.hpp"
#include "factorum/matching.hpp"

namespace factorum {

enum class GadgetLabel { Required, Optional };

/// A matching gadget. Vertices 0..stub_count-1 are the stubs U; the rest are
/// internal vertices with a required ({1}) or optional ({0,1}) label.
struct GadgetBlueprint {
  std::size_t stub_count = 0;
  std::vector<GadgetLabel> internal;  // label of vertex stub_count + i
  std::vector<Endpoints> edges;
  DegreeConstraint modeled;

  std::size_t vertex_count() const { return stub_count + internal.size(); }
  bool is_stub(std::size_t x) const { return x < stub_count; }
  bool is_required(std::size_t x) const {
    return x >= stub_count && internal[x - stub_count] == GadgetLabel::Required;
  }
  bool is_optional(std::size_t x) const {
    return x >= stub_count && internal[x - stub_count] == GadgetLabel::Optional;
  }
};

/// Stubs U (d), V1 (d, required, stub i -- V1 i), V2 (d-g: f-g optional then
/// d-f required), complete bipartite V1 x V2. Realizes {g..f}.
inline GadgetBlueprint build_interval_gadget(unsigned g, unsigned f, unsigned d) {
  if (g > f || f > d) throw UsageError("interval gadget needs 0 <= g <= f <= d");
  GadgetBlueprint gb;
  gb.stub_count = d;
  gb.modeled = DegreeConstraint::range(d, g, f);
  const std::size_t v1 = d;
  const std::size_t v2 = 2 * static_cast<std::size_t>(d);
  gb.internal.assign(d, GadgetLabel::Required);
  for (unsigned i = 0; i < d - g; ++i)
    gb.internal.push_back(i < f - g ? GadgetLabel::Optional : GadgetLabel::Required);
  for (unsigned i = 0; i < d; ++i) gb.edges.push_back({i, v1 + i});
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d - g; ++j) gb.edges.push_back({v1 + i, v2 + j});
  return gb;
}

/// Same frame as the interval gadget with every V2 vertex required, plus
/// (f-g)/2 disjoint slack edges inside V2. Realizes {g, g+2, .., f}.
inline GadgetBlueprint build_parity_gadget(unsigned g, unsigned f, unsigned d) {
  if (g > f || f > d) throw UsageError("parity gadget needs 0 <= g <= f <= d");
  if ((f - g) % 2 != 0) throw UsageError("parity gadget needs f = g mod 2");
  GadgetBlueprint gb;
  gb.stub_count = d;
  gb.modeled = DegreeConstraint::range(d, g, f, 2);
  const std::size_t v1 = d;
  const std::size_t v2 = 2 * static_cast<std::size_t>(d);
  gb.internal.assign(d + (d - g), GadgetLabel::Required);
  for (unsigned i = 0; i < d; ++i) gb.edges.push_back({i, v1 + i});
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d - g; ++j) gb.edges.push_back({v1 + i, v2 + j});
  for (unsigned s = 0; s < (f - g) / 2; ++s) gb.edges.push_back({v2 + 2 * s, v2 + 2 * s + 1});
  return gb;
}

/// Interval constraints get the interval gadget (singletons included);
/// parity intervals the parity gadget.
inline GadgetBlueprint gadget_for(const DegreeConstraint& d) {
  auto c = classify(d);
  if (c.is_interval) return build_interval_gadget(d.min(), d.max(), d.arity());
  if (c.is_parity_interval) return build_parity_gadget(d.min(), d.max(), d.arity());
  throw UsageError("no matching gadget for " + to_string(d));
}

/// The composed matching problem for a 𝒢-only instance.
struct ReducedGraph {
  MatchingProblem problem;
  std::vector<EdgeId> middle_edge;                     // original edge -> (c_e, c'_e) edge
  std::vector<std::pair<VertexId, VertexId>> connector;  // original edge -> (c_e, c'_e)
  std::vector<std::vector<VertexId>> gadget_vertices;  // original vertex -> its gadget, stubs first
  std::vector<VertexId> pendants;                      // one per optional gadget vertex
  std::optional<VertexId> parity_dummy;
};

/// Per vertex a gadget whose stubs follow the adjacency order; per edge
/// e = (x, y) the path stub_x - c_e - c'_e - stub_y weighted (0, ω(e), 0).
/// A stub matched inside its gadget means the edge is in the factor, which
/// happens exactly when c_e - c'_e is matched.
///
/// An optional vertex left unmatched by its gadget is covered by its own
/// pendant. Pendants form a zero-weight clique so unused ones pair up, and a
/// dummy joined to every pendant fixes the parity of the vertex count.
inline ReducedGraph reduce_instance(const Instance& inst) {
  require_valid(inst);
  const Graph& g = inst.graph();
  ReducedGraph r;
  std::vector<Endpoints> edges;
  std::vector<Rational> weights;
  std::vector<VertexId> optional_vertices;
  std::size_t next = 0;
  // stub of vertex v for its i-th incident edge
  std::vector<std::vector<VertexId>> stub(g.vertex_count());

  r.gadget_vertices.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const GadgetBlueprint gb = gadget_for(inst.constraint(v));
    const std::size_t offset = next;
    next += gb.vertex_count();
    for (std::size_t x = 0; x < gb.vertex_count(); ++x) {
      r.gadget_vertices[v].push_back(offset + x);
      if (gb.is_optional(x)) optional_vertices.push_back(offset + x);
    }
    for (std::size_t i = 0; i < gb.stub_count; ++i) stub[v].push_back(offset + i);
    for (const auto& e : gb.edges) {
      edges.push_back({offset + e.a, offset + e.b});
      weights.emplace_back(0);
    }
  }

  std::vector<std::vector<std::size_t>> position(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& inc = g.incident(v);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      if (position[v].size() <= inc[i].edge) position[v].resize(inc[i].edge + 1);
      position[v][inc[i].edge] = i;
    }
  }
  r.middle_edge.resize(g.edge_count());
  r.connector.resize(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto [x, y] = g.edge(e);
    const VertexId c = next++;
    const VertexId c2 = next++;
    r.connector[e] = {c, c2};
    edges.push_back({stub[x][position[x][e]], c});
    weights.emplace_back(0);
    r.middle_edge[e] = edges.size();
    edges.push_back({c, c2});
    weights.push_back(inst.weight(e));
    edges.push_back({c2, stub[y][position[y][e]]});
    weights.emplace_back(0);
  }

  for (VertexId o : optional_vertices) {
    const VertexId p = next++;
    r.pendants.push_back(p);
    edges.push_back({o, p});
    weights.emplace_back(0);
  }
  for (std::size_t i = 0; i < r.pendants.size(); ++i)
    for (std::size_t j = i + 1; j < r.pendants.size(); ++j) {
      edges.push_back({r.pendants[i], r.pendants[j]});
      weights.emplace_back(0);
    }
  if (!r.pendants.empty() && next % 2 == 1) {
    r.parity_dummy = next++;
    for (VertexId p : r.pendants) {
      edges.push_back({p, *r.parity_dummy});
      weights.emplace_back(0);
    }
  }
  r.problem = MatchingProblem{Graph(next, edges), std::move(weights)};
  return r;
}

/// Edges of the original instance whose middle connector edge is matched.
inline EdgeSet active_edges(const Instance& inst, const ReducedGraph& r, const EdgeSet& matching) {
  EdgeSet s(inst.graph());
  for (EdgeId e = 0; e < inst.edge_count(); ++e)
    if (matching.contains(r.middle_edge[e])) s.insert(e);
  return s;
}

/// Exact optimum of a 𝒢-only instance through the gadget reduction.
inline std::optional<Factor> opt_matching_backend(const Instance& inst,
                                                  const MatchingOptions& opt = {}) {
  for (VertexId v = 0; v < inst.vertex_count(); ++v)
    if (!classify(inst.constraint(v)).in_g())
      throw UsageError("matching backend needs interval or parity constraints; vertex " +
                       std::to_string(v) + " has " + to_string(inst.constraint(v)));
  const ReducedGraph r = reduce_instance(inst);
  auto m = max_weight_perfect_matching(r.problem, opt);
  if (!m) return std::nullopt;
  EdgeSet s = active_edges(inst, r, m->edges);
  if (!is_factor(inst, s)) throw InternalError("reduced matching maps to a non-factor");
  Factor f = make_factor(inst, std::move(s));
  if (f.weight != m->weight) throw InternalError("reduced matching weight differs from factor weight");
  return f;
}

inline constexpr std::size_t kDefaultDecisionCap = 20;

/// Tries every parity split of T in lexicographic order (first T-vertex
/// slowest, D^0 before D^1) and returns the first factor found.
/// Exponential in |T| only.
template <typename Opt>
  requires std::invocable<Opt&, const Instance&>
std::optional<Factor> decision_split_backend(const Instance& inst, Opt&& optimize,
                                             std::size_t cap = kDefaultDecisionCap) {
  require_admissible(inst);
  const auto t = t_set(inst);
  if (t.size() > cap)
    throw CapacityError("decision split enumeration capped at |T| = " + std::to_string(cap) +
                        ", got " + std::to_string(t.size()));
  std::vector<Split> halves;
  for (VertexId v : t) halves.push_back(split(inst.constraint(v)));
  const std::uint64_t total = std::uint64_t{1} << t.size();
  for (std::uint64_t code = 0; code < total; ++code) {
    auto cs = inst.constraints();
    for (std::size_t i = 0; i < t.size(); ++i) {
      bool one = (code >> (t.size() - 1 - i)) & 1;
      cs[t[i]] = one ? halves[i].d1 : halves[i].d0;
    }
    if (auto f = optimize(inst.with_constraints(std::move(cs)))) return f;
  }
  return std::nullopt;
}

inline std::optional<Factor> decision_split_backend(const Instance& inst,
                                                    std::size_t cap = kDefaultDecisionCap) {
  return decision_split_backend(
      inst, [](const Instance& sub) { return opt_matching_backend(sub); }, cap);
}

/// Decision and Optimization behind one handle, with call counters.
class OracleHandle {
 public:
  using Backend = std::function<std::optional<Factor>(const Instance&)>;

  OracleHandle(std::string decision_id, Backend decision, std::string optimization_id,
               Backend optimization)
      : decision_id_(std::move(decision_id)),
        optimization_id_(std::move(optimization_id)),
        decision_(std::move(decision)),
        optimization_(std::move(optimization)) {}

  /// "matching": split-enumeration Decision + gadget/matching Optimization.
  /// "brute": exhaustive search for both.
  static OracleHandle named(const std::string& id, std::size_t decision_cap = kDefaultDecisionCap,
                            MatchingOptions opt = {}) {
    if (id == "matching") {
      return OracleHandle(
          "split",
          [decision_cap, opt](const Instance& inst) {
            return decision_split_backend(
                inst, [opt](const Instance& sub) { return opt_matching_backend(sub, opt); },
                decision_cap);
          },
          "matching", [opt](const Instance& inst) { return opt_matching_backend(inst, opt); });
    }
    if (id == "brute") {
      return OracleHandle(
          "brute", [](const Instance& inst) { return brute_force_opt(inst); }, "brute",
          [](const Instance& inst) { return brute_force_opt(inst); });
    }
    throw UsageError("unknown oracle backend '" + id + "'");
  }

  OracleHandle(const OracleHandle& o)
      : decision_id_(o.decision_id_),
        optimization_id_(o.optimization_id_),
        decision_(o.decision_),
        optimization_(o.optimization_),
        dec_calls_(o.dec_calls_.load()),
        opt_calls_(o.opt_calls_.load()) {}

  std::optional<Factor> decision(const Instance& inst) {
    dec_calls_.fetch_add(1, std::memory_order_relaxed);
    return decision_(inst);
  }
  std::optional<Factor> optimization(const Instance& inst) {
    opt_calls_.fetch_add(1, std::memory_order_relaxed);
    return optimization_(inst);
  }

  const std::string& decision_id() const { return decision_id_; }
  const std::string& optimization_id() const { return optimization_id_; }
  std::uint64_t dec_calls() const { return dec_calls_.load(); }
  std::uint64_t opt_calls() const { return opt_calls_.load(); }
  void reset_counters() {
    dec_calls_ = 0;
    opt_calls_ = 0;
  }

 private:
  std::string decision_id_;
  std::string optimization_id_;
  Backend decision_;
  Backend optimization_;
  std::atomic<std::uint64_t> dec_calls_{0};
  std::atomic<std::uint64_t> opt_calls_{0};
};

}  // namespace factorum
