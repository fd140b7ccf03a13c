#pragma once

// Normalization of a factor pair to a key instance, basic factors, and the
// constructive search for a positive basic factor.

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "factorum/degree_constraint.hpp"
#include "factorum/error.hpp"
#include "factorum/graph.hpp"
#include "factorum/instance.hpp"

namespace factorum {

// ---------------------------------------------------------------- key instances

inline const DegreeConstraint& kTypeOneLabel() {
  static const DegreeConstraint d = DegreeConstraint::of(3, {0, 1, 3});
  return d;
}
inline const DegreeConstraint& kTypeTwoLabel() {
  static const DegreeConstraint d = DegreeConstraint::of(3, {0, 2, 3});
  return d;
}

/// Subcubic, no isolated vertex, labels forced by degree.
inline bool is_key_instance(const Instance& inst) {
  if (!validate(inst).valid()) return false;
  const Graph& g = inst.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& d = inst.constraint(v);
    switch (g.degree(v)) {
      case 1:
        if (d != DegreeConstraint::of(1, {0, 1})) return false;
        break;
      case 2:
        if (d != DegreeConstraint::of(2, {0, 2})) return false;
        break;
      case 3:
        if (d != kTypeOneLabel() && d != kTypeTwoLabel()) return false;
        break;
      default:
        return false;
    }
  }
  return true;
}

inline bool is_type1(const Instance& key, VertexId x) {
  return key.graph().degree(x) == 3 && key.constraint(x) == kTypeOneLabel();
}
inline bool is_type2(const Instance& key, VertexId x) {
  return key.graph().degree(x) == 3 && key.constraint(x) == kTypeTwoLabel();
}

enum class BasicShape { Path, Cycle, Tadpole, Dumbbell, Theta };

inline const char* to_string(BasicShape s) {
  switch (s) {
    case BasicShape::Path: return "path";
    case BasicShape::Cycle: return "cycle";
    case BasicShape::Tadpole: return "tadpole";
    case BasicShape::Dumbbell: return "dumbbell";
    case BasicShape::Theta: return "theta";
  }
  return "?";
}

struct BasicFactor {
  EdgeSet edges;
  BasicShape shape = BasicShape::Path;
  std::vector<VertexId> distinguished;  // vertices of degree 1 or 3 in the factor
  Rational weight;
};

/// Shape of a factor of a key instance, or nullopt if it is not basic.
inline std::optional<BasicShape> classify_basic(const Instance& key, const EdgeSet& s) {
  if (!is_factor(key, s)) throw UsageError("classify_basic needs a factor");
  if (s.empty()) return std::nullopt;
  const Graph& g = key.graph();
  auto deg = degrees_in(g, s);
  std::size_t nv = 0;
  std::size_t c1 = 0;
  std::size_t c3 = 0;
  std::vector<VertexId> cubic;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (deg[v] == 0) continue;
    ++nv;
    if (deg[v] == 1) ++c1;
    if (deg[v] == 3) {
      ++c3;
      cubic.push_back(v);
    }
  }
  const std::size_t m = s.size();
  // connectivity of the edge set
  auto label = component_labels(g, &s);
  std::optional<std::size_t> comp;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (deg[v] == 0) continue;
    if (!comp) comp = label[v];
    if (label[v] != *comp) return std::nullopt;
  }
  if (c3 == 0 && c1 == 2 && m + 1 == nv) return BasicShape::Path;
  if (c3 == 0 && c1 == 0 && m == nv) return BasicShape::Cycle;
  if (c3 == 1 && c1 == 1 && m == nv) return BasicShape::Tadpole;
  if (c3 == 2 && c1 == 0 && m == nv + 1) {
    // two degree-3 points: a bridge separates two cycles, otherwise a theta
    std::vector<Endpoints> es;
    std::vector<VertexId> rename(g.vertex_count(), 0);
    std::size_t next = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (deg[v] > 0) rename[v] = next++;
    for (EdgeId e : s.ids()) es.push_back({rename[g.edge(e).a], rename[g.edge(e).b]});
    Graph sub(next, es);
    if (!bridges(sub).empty()) return BasicShape::Dumbbell;
    const bool mixed = (is_type1(key, cubic[0]) && is_type2(key, cubic[1])) ||
                       (is_type2(key, cubic[0]) && is_type1(key, cubic[1]));
    if (mixed) return BasicShape::Theta;
  }
  return std::nullopt;
}

inline std::optional<BasicFactor> as_basic_factor(const Instance& key, const EdgeSet& s) {
  auto shape = classify_basic(key, s);
  if (!shape) return std::nullopt;
  BasicFactor bf{s, *shape, {}, key.weight_of(s)};
  auto deg = degrees_in(key.graph(), s);
  for (VertexId v = 0; v < deg.size(); ++v)
    if (deg[v] == 1 || deg[v] == 3) bf.distinguished.push_back(v);
  return bf;
}

inline constexpr std::size_t kBasicEnumerationCap = 20;

/// Every basic factor once, in the order of the factor enumeration (edge ids
/// ascending, exclusion before inclusion). `fn` may return false to stop.
inline void for_each_basic_factor(const Instance& key,
                                  const std::function<bool(const BasicFactor&)>& fn,
                                  std::size_t cap = kBasicEnumerationCap) {
  if (key.edge_count() > cap)
    throw CapacityError("basic factor enumeration capped at " + std::to_string(cap) + " edges");
  if (!is_key_instance(key)) throw UsageError("not a key instance");
  for_each_factor(key, [&](const EdgeSet& s) {
    if (auto bf = as_basic_factor(key, s)) return fn(*bf);
    return true;
  });
}

inline std::vector<BasicFactor> enumerate_basic_factors(const Instance& key,
                                                        std::size_t cap = kBasicEnumerationCap) {
  std::vector<BasicFactor> out;
  for_each_basic_factor(
      key,
      [&](const BasicFactor& bf) {
        out.push_back(bf);
        return true;
      },
      cap);
  return out;
}

// ---------------------------------------------------------------- normalization

struct NormalizationResult {
  Instance original;
  EdgeSet f;
  EdgeSet g;
  Instance key;                                  // weights are the signed weights
  std::vector<std::vector<VertexId>> expansion;  // S(v)
  std::vector<VertexId> key_vertex_origin;       // key vertex -> original vertex
  std::vector<EdgeId> key_to_original;
  std::vector<std::optional<EdgeId>> original_to_key;
  std::vector<std::optional<VertexId>> residual;  // T-vertex -> its degree-r key vertex

  const std::vector<Rational>& signed_weights() const { return key.weights(); }
};

/// Builds the key instance of the pair (f, g) on f Δ g. Separation pairs the
/// lowest-id f-edge with the lowest-id g-edge; residual edges of a parity
/// vertex are paired by ascending id.
inline NormalizationResult normalize(const Instance& inst, const EdgeSet& f, const EdgeSet& g) {
  require_admissible(inst);
  if (!is_factor(inst, f) || !is_factor(inst, g)) throw UsageError("normalize needs two factors");
  const Graph& graph = inst.graph();
  const EdgeSet delta = sym_diff(f, g);

  NormalizationResult r{inst, f, g, Instance(), {}, {}, {}, {}, {}};
  r.expansion.resize(graph.vertex_count());
  r.residual.resize(graph.vertex_count());
  r.original_to_key.resize(graph.edge_count());

  // side[e] = key vertex at (endpoint a, endpoint b)
  std::vector<std::pair<VertexId, VertexId>> side(graph.edge_count());
  std::vector<DegreeConstraint> labels;
  auto attach = [&](EdgeId e, VertexId v, VertexId key_vertex) {
    if (graph.edge(e).a == v) side[e].first = key_vertex;
    else side[e].second = key_vertex;
  };
  auto fresh = [&](VertexId origin, DegreeConstraint label) {
    const VertexId x = labels.size();
    labels.push_back(label);
    r.key_vertex_origin.push_back(origin);
    r.expansion[origin].push_back(x);
    return x;
  };

  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    std::vector<EdgeId> in_f;
    std::vector<EdgeId> in_g;
    for (const auto& inc : graph.incident(v)) {
      if (!delta.contains(inc.edge)) continue;
      (f.contains(inc.edge) ? in_f : in_g).push_back(inc.edge);
    }
    std::sort(in_f.begin(), in_f.end());
    std::sort(in_g.begin(), in_g.end());
    const std::size_t pairs = std::min(in_f.size(), in_g.size());
    for (std::size_t i = 0; i < pairs; ++i) {
      VertexId x = fresh(v, DegreeConstraint::of(2, {0, 2}));
      attach(in_f[i], v, x);
      attach(in_g[i], v, x);
    }
    std::vector<EdgeId> rest(in_f.begin() + pairs, in_f.end());
    rest.insert(rest.end(), in_g.begin() + pairs, in_g.end());
    if (rest.empty()) continue;
    const auto cls = classify(inst.constraint(v));
    if (cls.is_interval) {
      for (EdgeId e : rest) attach(e, v, fresh(v, DegreeConstraint::of(1, {0, 1})));
    } else if (cls.is_parity_interval) {
      if (rest.size() % 2 != 0) throw InternalError("odd residual at a parity vertex");
      for (std::size_t i = 0; i < rest.size(); i += 2) {
        VertexId x = fresh(v, DegreeConstraint::of(2, {0, 2}));
        attach(rest[i], v, x);
        attach(rest[i + 1], v, x);
      }
    } else {
      const auto deg_f = static_cast<unsigned>(degree_in(graph, f, v));
      DegreeConstraint label;
      switch (rest.size()) {
        case 1: label = DegreeConstraint::of(1, {0, 1}); break;
        case 2: label = DegreeConstraint::of(2, {0, 2}); break;
        case 3:
          label = split(inst.constraint(v)).d1.contains(deg_f) ? kTypeOneLabel() : kTypeTwoLabel();
          break;
        default: throw InternalError("residual above 3 at a type-1/type-2 vertex");
      }
      VertexId x = fresh(v, label);
      r.residual[v] = x;
      for (EdgeId e : rest) attach(e, v, x);
    }
  }

  std::vector<Endpoints> key_edges;
  std::vector<Rational> signed_w;
  for (EdgeId e : delta.ids()) {
    r.original_to_key[e] = key_edges.size();
    r.key_to_original.push_back(e);
    key_edges.push_back({side[e].first, side[e].second});
    signed_w.push_back(g.contains(e) ? inst.weight(e) : Rational(-inst.weight(e)));
  }
  Graph key_graph(labels.size(), key_edges);
  r.key = Instance(std::move(key_graph), std::move(labels), std::move(signed_w));
  return r;
}

/// H ⊆ f Δ g, f Δ H a heavier factor, at most two odd vertices, odd T-vertices
/// only where f and g differ in parity.
inline bool is_basic_subgraph(const Instance& inst, const EdgeSet& f, const EdgeSet& g,
                              const EdgeSet& h) {
  if (!is_subset(h, sym_diff(f, g))) return false;
  const EdgeSet moved = sym_diff(f, h);
  if (!is_factor(inst, moved)) return false;
  if (!(inst.weight_of(moved) > inst.weight_of(f))) return false;
  auto deg = degrees_in(inst.graph(), h);
  std::size_t odd = 0;
  const auto t_diff = t_odd(inst, f, g);
  for (VertexId v = 0; v < deg.size(); ++v) {
    if (deg[v] % 2 == 0) continue;
    ++odd;
    if (classify(inst.constraint(v)).in_t() &&
        !std::binary_search(t_diff.begin(), t_diff.end(), v))
      return false;
  }
  return odd <= 2;
}

/// The original edges of a basic factor of the key instance, validated as a
/// basic augmenting subgraph of the pair.
inline EdgeSet lift_basic_subgraph(const NormalizationResult& norm, const BasicFactor& bf) {
  if (!bf.edges.belongs_to(norm.key.graph())) throw UsageError("basic factor is not over the key graph");
  EdgeSet h(norm.original.graph());
  for (EdgeId k : bf.edges.ids()) h.insert(norm.key_to_original[k]);
  const Rational gain = norm.original.weight_of(sym_diff(norm.f, h)) - norm.original.weight_of(norm.f);
  if (gain != norm.key.weight_of(bf.edges))
    throw InternalError("lifted gain differs from the signed weight");
  if (!is_basic_subgraph(norm.original, norm.f, norm.g, h))
    throw InternalError("lifted subgraph is not a basic augmenting subgraph");
  return h;
}

// ---------------------------------------------------------------- constructive search

namespace detail {

// A key instance on its own compact graph, with each edge traced back to the
// edge of the top-level key instance it stands for.
struct Local {
  Instance inst;
  std::vector<EdgeId> top;
};

inline Local induce(const Local& cur, const EdgeSet& s) {
  const Graph& g = cur.inst.graph();
  auto deg = degrees_in(g, s);
  std::vector<VertexId> rename(g.vertex_count(), 0);
  std::vector<DegreeConstraint> cs;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (deg[v] == 0) continue;
    rename[v] = cs.size();
    const auto d = static_cast<unsigned>(deg[v]);
    const std::uint64_t window = (DegreeConstraint::bit(d + 1)) - 1;
    cs.emplace_back(d, cur.inst.constraint(v).mask() & window);
  }
  std::vector<Endpoints> es;
  std::vector<Rational> ws;
  std::vector<EdgeId> top;
  for (EdgeId e : s.ids()) {
    es.push_back({rename[g.edge(e).a], rename[g.edge(e).b]});
    ws.push_back(cur.inst.weight(e));
    top.push_back(cur.top[e]);
  }
  Graph sub(cs.size(), es);
  return Local{Instance(std::move(sub), std::move(cs), std::move(ws)), std::move(top)};
}

inline Rational weight_of_ids(const Instance& inst, const std::vector<EdgeId>& ids) {
  Rational w = 0;
  for (EdgeId e : ids) w += inst.weight(e);
  return w;
}

// Splits a cycle at the marked vertices into the paths between consecutive marks.
inline std::vector<PathDescriptor> split_cycle(const PathDescriptor& c,
                                               const std::function<bool(VertexId)>& marked) {
  const std::size_t len = c.edges.size();
  std::size_t start = len;
  for (std::size_t i = 0; i < len; ++i)
    if (marked(c.vertices[i])) {
      start = i;
      break;
    }
  std::vector<PathDescriptor> out;
  if (start == len) return out;
  PathDescriptor cur{{c.vertices[start]}, {}};
  for (std::size_t step = 0; step < len; ++step) {
    const std::size_t i = (start + step) % len;
    cur.edges.push_back(c.edges[i]);
    const VertexId next = c.vertices[i + 1];
    cur.vertices.push_back(next);
    if (marked(next)) {
      out.push_back(cur);
      cur = PathDescriptor{{next}, {}};
    }
  }
  return out;
}

inline EdgeSet complement(const Graph& g, const std::vector<EdgeId>& ids) {
  EdgeSet s = EdgeSet::full(g);
  for (EdgeId e : ids) s.erase(e);
  return s;
}

inline PathDescriptor join_cycle(const PathDescriptor& first, const PathDescriptor& second) {
  // first: a -> b, second: a -> b; returns the cycle a -> b -> a
  PathDescriptor c = first;
  for (std::size_t i = second.edges.size(); i-- > 0;) {
    c.edges.push_back(second.edges[i]);
    c.vertices.push_back(second.vertices[i]);
  }
  return c;
}

// BFS path from s to t using only edges in `allowed_edges` and avoiding `banned`.
inline std::optional<PathDescriptor> path_within(const Graph& g, const EdgeSet& allowed_edges,
                                                 VertexId s, VertexId t,
                                                 std::optional<VertexId> banned) {
  std::vector<std::optional<EdgeId>> via(g.vertex_count());
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<VertexId> q;
  seen[s] = true;
  q.push(s);
  while (!q.empty()) {
    VertexId x = q.front();
    q.pop();
    if (x == t) break;
    for (const auto& inc : g.incident(x)) {
      if (!allowed_edges.contains(inc.edge) || seen[inc.neighbor]) continue;
      if (banned && inc.neighbor == *banned) continue;
      seen[inc.neighbor] = true;
      via[inc.neighbor] = inc.edge;
      q.push(inc.neighbor);
    }
  }
  if (!seen[t]) return std::nullopt;
  PathDescriptor p{{t}, {}};
  for (VertexId x = t; x != s;) {
    EdgeId e = *via[x];
    p.edges.push_back(e);
    x = g.edge(e).other(x);
    p.vertices.push_back(x);
  }
  std::reverse(p.vertices.begin(), p.vertices.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

inline PathDescriptor subpath(const PathDescriptor& p, std::size_t from, std::size_t to) {
  // vertices from..to (inclusive), either direction
  PathDescriptor out;
  if (from <= to) {
    out.vertices.assign(p.vertices.begin() + from, p.vertices.begin() + to + 1);
    out.edges.assign(p.edges.begin() + from, p.edges.begin() + to);
  } else {
    for (std::size_t i = from + 1; i-- > to;) out.vertices.push_back(p.vertices[i]);
    for (std::size_t i = from; i-- > to;) out.edges.push_back(p.edges[i]);
  }
  return out;
}

inline PathDescriptor concat(PathDescriptor a, const PathDescriptor& b) {
  // a ends where b starts
  a.vertices.insert(a.vertices.end(), b.vertices.begin() + 1, b.vertices.end());
  a.edges.insert(a.edges.end(), b.edges.begin(), b.edges.end());
  return a;
}

inline std::size_t index_of(const PathDescriptor& p, VertexId x) {
  return static_cast<std::size_t>(std::find(p.vertices.begin(), p.vertices.end(), x) -
                                  p.vertices.begin());
}

class PositiveSearch {
 public:
  // A basic factor of `cur` (in its own edge ids) with positive weight.
  EdgeSet solve(Local cur) {
    std::vector<EdgeId> to_cur(cur.inst.edge_count());
    for (EdgeId e = 0; e < to_cur.size(); ++e) to_cur[e] = e;
    const Graph& root_graph = cur.inst.graph();
    const auto root = cur.inst;
    // track how each local edge maps to the root of this call
    Local work{cur.inst, to_cur};
    while (!classify_basic(work.inst, EdgeSet::full(work.inst.graph()))) {
      EdgeSet smaller = shrink(work.inst);
      check_shrink(work.inst, smaller);
      work = induce(work, smaller);
    }
    EdgeSet out(root_graph);
    for (EdgeId e : work.top) out.insert(e);
    (void)root;
    return out;
  }

 private:
  static void check_shrink(const Instance& inst, const EdgeSet& s) {
    if (s.size() >= inst.edge_count() || s.empty() || !is_factor(inst, s) ||
        !(inst.weight_of(s) > 0))
      throw InternalError("shrink step did not return a smaller positive factor");
  }

  // A factor of g with positive weight and fewer edges, for a key instance
  // that is not itself basic.
  EdgeSet shrink(const Instance& inst) {
    const Graph& g = inst.graph();
    if (!is_connected(g)) return disconnected(inst);
    if (is_two_connected(g)) return two_connected(inst);
    return long_bridge(inst);
  }

  static EdgeSet disconnected(const Instance& inst) {
    const Graph& g = inst.graph();
    auto label = component_labels(g);
    EdgeSet first(g);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (label[g.edge(e).a] == label[0]) first.insert(e);
    if (inst.weight_of(first) > 0) return first;
    return set_minus(EdgeSet::full(g), first);
  }

  // Cycle with k type-1 and l type-2 vertices, k != 1 and l != 1.
  static EdgeSet cycle_case(const Instance& inst, const PathDescriptor& c) {
    const Graph& g = inst.graph();
    auto t1 = [&](VertexId x) { return is_type1(inst, x); };
    auto t2 = [&](VertexId x) { return is_type2(inst, x); };
    std::size_t k = 0;
    std::size_t l = 0;
    for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      k += t1(c.vertices[i]);
      l += t2(c.vertices[i]);
    }
    if (k == 1 || l == 1) throw InternalError("cycle case needs k != 1 and l != 1");
    if (weight_of_ids(inst, c.edges) > 0) {
      if (k == 0) return EdgeSet(g, std::span<const EdgeId>(c.edges));
      for (const auto& p : split_cycle(c, t1))
        if (weight_of_ids(inst, p.edges) > 0) return EdgeSet(g, std::span<const EdgeId>(p.edges));
      throw InternalError("positive cycle without a positive segment");
    }
    if (l == 0) return complement(g, c.edges);
    for (const auto& p : split_cycle(c, t2))
      if (!(weight_of_ids(inst, p.edges) > 0)) return complement(g, p.edges);
    throw InternalError("non-positive cycle without a non-positive segment");
  }

  static EdgeSet two_connected(const Instance& inst) {
    const Graph& g = inst.graph();
    std::vector<VertexId> type1;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
      if (is_type1(inst, x)) type1.push_back(x);
    auto t2 = [&](VertexId x) { return is_type2(inst, x); };
    auto count_t2 = [&](const PathDescriptor& p, bool closed) {
      std::size_t n = 0;
      const std::size_t end = closed ? p.vertices.size() - 1 : p.vertices.size();
      for (std::size_t i = 0; i < end; ++i) n += t2(p.vertices[i]);
      return n;
    };

    if (type1.empty()) {
      auto c = find_cycle_through(g, 0);
      if (!c) throw InternalError("2-connected graph without a cycle");
      return cycle_case(inst, *c);
    }

    if (type1.size() == 1) {
      const VertexId u = type1[0];
      auto c = find_cycle_through(g, u);
      if (!c) throw InternalError("no cycle through the type-1 vertex");
      const EdgeSet cset = edges_of(g, *c);
      const PathDescriptor p_uw = find_escape_path(g, cset, u);
      const EdgeSet h = set_union(cset, edges_of(g, p_uw));
      auto hdeg = degrees_in(g, h);
      std::optional<VertexId> s;
      for (VertexId x = 0; x < g.vertex_count() && !s; ++x)
        if (hdeg[x] == 2 && g.degree(x) == 3) s = x;
      if (!s) throw InternalError("theta equals the graph");
      const PathDescriptor p_sr = find_escape_path(g, h, *s);
      auto inside = path_within(g, h, *s, p_sr.back(), u);
      if (!inside) throw InternalError("no path avoiding the type-1 vertex");
      return cycle_case(inst, join_cycle(p_sr, *inside));
    }

    auto c = find_cycle_through_pair(g, type1[0], type1[1]);
    if (!c) throw InternalError("no cycle through two type-1 vertices");
    if (count_t2(*c, true) != 1) return cycle_case(inst, *c);

    VertexId v = 0;
    for (std::size_t i = 0; i + 1 < c->vertices.size(); ++i)
      if (t2(c->vertices[i])) v = c->vertices[i];
    const EdgeSet cset = edges_of(g, *c);
    const PathDescriptor p_vu = find_escape_path(g, cset, v);
    const VertexId u = p_vu.back();

    // the two arcs of C from v to u
    const std::size_t len = c->edges.size();
    const std::size_t iv = index_of(*c, v);
    PathDescriptor rot{{v}, {}};
    for (std::size_t step = 0; step < len; ++step) {
      const std::size_t i = (iv + step) % len;
      rot.edges.push_back(c->edges[i]);
      rot.vertices.push_back(c->vertices[i + 1]);
    }
    const std::size_t iu = index_of(rot, u);
    PathDescriptor arc1 = subpath(rot, 0, iu);
    PathDescriptor arc2 = subpath(rot, len, iu);  // v backwards to u
    arc2.vertices.front() = v;

    std::optional<VertexId> w;
    for (VertexId x : type1)
      if (x != u && index_of(*c, x) < c->vertices.size()) {
        w = x;
        break;
      }
    if (!w) {
      for (std::size_t i = 0; i + 1 < c->vertices.size(); ++i)
        if (is_type1(inst, c->vertices[i]) && c->vertices[i] != u) {
          w = c->vertices[i];
          break;
        }
    }
    if (!w) throw InternalError("cycle lost its second type-1 vertex");
    PathDescriptor p1 = index_of(arc1, *w) < arc1.vertices.size() ? arc1 : arc2;
    PathDescriptor p2 = index_of(arc1, *w) < arc1.vertices.size() ? arc2 : arc1;

    if (count_t2(p_vu, false) >= 2) return cycle_case(inst, join_cycle(p_vu, p1));

    const EdgeSet h = set_union(cset, edges_of(g, p_vu));
    const PathDescriptor p_ws = find_escape_path(g, h, *w);
    const VertexId s = p_ws.back();
    bool has_t2 = false;
    for (VertexId x : p_ws.vertices) has_t2 = has_t2 || t2(x);
    if (!has_t2) {
      auto inside = path_within(g, h, *w, s, v);
      if (!inside) throw InternalError("no path avoiding the type-2 branch point");
      return cycle_case(inst, join_cycle(p_ws, *inside));
    }
    // a path from w to s inside the theta that runs through v
    const std::vector<PathDescriptor> branches{p1, p2, p_vu};
    std::size_t bs = 3;
    for (std::size_t b = 0; b < 3; ++b)
      if (index_of(branches[b], s) < branches[b].vertices.size()) bs = b;
    if (bs == 3) throw InternalError("escape path ends outside the theta");
    const std::size_t pw = index_of(p1, *w);
    PathDescriptor via_v;
    if (bs != 0) {
      via_v = concat(subpath(p1, pw, 0), subpath(branches[bs], 0, index_of(branches[bs], s)));
    } else {
      const std::size_t ps = index_of(p1, s);
      const std::size_t end = p1.vertices.size() - 1;
      const PathDescriptor& other = p2;
      if (pw < ps) {
        via_v = concat(concat(subpath(p1, pw, 0), other), subpath(p1, end, ps));
      } else {
        via_v = concat(concat(subpath(p1, pw, end), subpath(other, other.vertices.size() - 1, 0)),
                       subpath(p1, 0, ps));
      }
    }
    return cycle_case(inst, join_cycle(p_ws, via_v));
  }

  EdgeSet long_bridge(const Instance& inst) {
    const Graph& g = inst.graph();
    auto br = bridges(g);
    if (br.empty()) throw InternalError("connected, not 2-connected, yet no bridge");
    const EdgeId bridge = br.front();

    // extend through degree-2 vertices in both directions
    std::vector<EdgeId> path{bridge};
    auto extend = [&](VertexId from, EdgeId via) {
      VertexId x = from;
      EdgeId last = via;
      while (g.degree(x) == 2) {
        EdgeId next = g.incident(x)[0].edge == last ? g.incident(x)[1].edge : g.incident(x)[0].edge;
        path.push_back(next);
        x = g.edge(next).other(x);
        last = next;
      }
      return x;
    };
    VertexId ends[2] = {extend(g.edge(bridge).a, bridge), extend(g.edge(bridge).b, bridge)};
    EdgeSet path_set(g, std::span<const EdgeId>(path));
    const EdgeSet rest = set_minus(EdgeSet::full(g), path_set);
    auto label = component_labels(g, &rest);

    auto side_edges = [&](VertexId end) {
      EdgeSet s(g);
      if (g.degree(end) == 1) return s;
      for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (rest.contains(e) && label[g.edge(e).a] == label[end]) s.insert(e);
      return s;
    };
    auto is_cycle_set = [&](const EdgeSet& s) {
      if (s.empty()) return false;
      for (auto d : degrees_in(g, s))
        if (d != 0 && d != 2) return false;
      return true;  // one component by construction
    };
    VertexId u = ends[0];
    EdgeSet gu = side_edges(u);
    if (gu.empty() || is_cycle_set(gu)) {
      u = ends[1];
      gu = side_edges(u);
    }
    if (gu.empty() || is_cycle_set(gu) || g.degree(u) != 3)
      throw InternalError("long bridge joins two basic sides");

    const EdgeSet outside = set_minus(EdgeSet::full(g), gu);  // G \ G_u
    const Rational outside_w = inst.weight_of(outside);
    std::vector<EdgeId> at_u;
    for (const auto& inc : g.incident(u))
      if (gu.contains(inc.edge)) at_u.push_back(inc.edge);
    std::sort(at_u.begin(), at_u.end());
    const EdgeId e1 = at_u[0];
    const EdgeId e2 = at_u[1];

    // G': G_u with u split into u1 (on e1) and u2 (on e2), both {0,1}
    auto deg_u = degrees_in(g, gu);
    std::vector<VertexId> rename(g.vertex_count(), 0);
    std::vector<DegreeConstraint> cs;
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
      if (deg_u[x] == 0 || x == u) continue;
      rename[x] = cs.size();
      cs.push_back(inst.constraint(x));
    }
    const VertexId u1 = cs.size();
    cs.push_back(DegreeConstraint::of(1, {0, 1}));
    const VertexId u2 = cs.size();
    cs.push_back(DegreeConstraint::of(1, {0, 1}));
    std::vector<Endpoints> es;
    std::vector<Rational> ws;
    std::vector<EdgeId> back;
    for (EdgeId e : gu.ids()) {
      auto [a, b] = g.edge(e);
      VertexId x = a == u ? (e == e1 ? u1 : u2) : rename[a];
      VertexId y = b == u ? (e == e1 ? u1 : u2) : rename[b];
      es.push_back({x, y});
      ws.push_back(e == e1 ? Rational(inst.weight(e) + outside_w) : inst.weight(e));
      back.push_back(e);
    }
    Graph split_graph(cs.size(), es);
    Instance split_inst(std::move(split_graph), std::move(cs), std::move(ws));
    std::vector<EdgeId> identity(back.size());
    for (EdgeId e = 0; e < identity.size(); ++e) identity[e] = e;
    const EdgeSet fprime = PositiveSearch().solve(Local{split_inst, identity});

    EdgeSet f(g);
    for (EdgeId e : fprime.ids()) f.insert(back[e]);
    const bool has1 = f.contains(e1);
    const bool has2 = f.contains(e2);
    const bool one_feasible = inst.constraint(u).contains(1);
    const EdgeSet h = set_union(f, outside);
    if (!has1 && !has2) return f;
    if (has1 && !has2) {
      if (!one_feasible) return h;
      if (inst.weight_of(f) > 0) return f;
      return outside;
    }
    if (!has1 && has2) {
      if (one_feasible) return f;
      if (inst.weight_of(gu) > 0) return gu;
      return h;
    }
    return h;
  }
};

}  // namespace detail

/// A basic factor of positive weight, found by repeatedly shrinking to a
/// smaller positive factor until the remaining graph is itself basic.
inline BasicFactor find_positive_basic_factor(const Instance& key) {
  if (!is_key_instance(key)) throw UsageError("not a key instance");
  if (!(key.weight_of(EdgeSet::full(key.graph())) > 0))
    throw UsageError("positive search needs positive total weight");
  std::vector<EdgeId> identity(key.edge_count());
  for (EdgeId e = 0; e < identity.size(); ++e) identity[e] = e;
  EdgeSet s = detail::PositiveSearch().solve(detail::Local{key, identity});
  auto bf = as_basic_factor(key, s);
  if (!bf || !(bf->weight > 0)) throw InternalError("positive search returned a non-basic factor");
  return *bf;
}

/// Heaviest positive basic factor with even degree at u, without checking
/// any hypothesis. nullopt if there is none.
inline std::optional<BasicFactor> best_even_at_u_basic_factor(const Instance& key, VertexId u) {
  std::optional<BasicFactor> best;
  for_each_basic_factor(key, [&](const BasicFactor& bf) {
    if (bf.weight > 0 && degree_in(key.graph(), bf.edges, u) % 2 == 0 &&
        (!best || bf.weight > best->weight))
      best = bf;
    return true;
  });
  return best;
}

/// Positive basic factor with even degree at u under the hypotheses: ω(G) > 0,
/// ω(G) above every basic factor, and u of degree 1 or a degree-3 {0,2,3} vertex.
inline BasicFactor find_even_at_u_basic_factor(const Instance& key, VertexId u) {
  if (!is_key_instance(key)) throw UsageError("not a key instance");
  if (u >= key.vertex_count()) throw UsageError("vertex out of range");
  const Rational total = key.weight_of(EdgeSet::full(key.graph()));
  if (!(total > 0)) throw UsageError("hypothesis failed: total weight is not positive");
  const auto d = key.graph().degree(u);
  if (!(d == 1 || (d == 3 && key.constraint(u) == kTypeTwoLabel())))
    throw UsageError("hypothesis failed: u must have degree 1 or be a {0,2,3} vertex");
  for_each_basic_factor(key, [&](const BasicFactor& bf) {
    if (!(bf.weight < total))
      throw UsageError("hypothesis failed: a basic factor is as heavy as the whole graph");
    return true;
  });
  auto best = best_even_at_u_basic_factor(key, u);
  if (!best) throw InternalError("no positive basic factor with even degree at u");
  return *best;
}

}  // namespace factorum
