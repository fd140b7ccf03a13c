#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "factorum/error.hpp"

namespace factorum {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct Endpoints {
  VertexId a;
  VertexId b;

  VertexId other(VertexId v) const { return v == a ? b : a; }
  friend bool operator==(const Endpoints&, const Endpoints&) = default;
};

struct Incidence {
  EdgeId edge;
  VertexId neighbor;
};

/// Simple undirected graph with dense ids, immutable once built.
/// Adjacency lists keep edge insertion order.
class Graph {
 public:
  Graph() : Graph(0, {}) {}

  Graph(std::size_t vertex_count, std::span<const Endpoints> edges)
      : id_(next_id()), vertex_count_(vertex_count), adjacency_(vertex_count) {
    edges_.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.a >= vertex_count || e.b >= vertex_count)
        throw UsageError("edge endpoint out of range");
      if (e.a == e.b) throw UsageError("self-loop at vertex " + std::to_string(e.a));
      if (!lookup_.emplace(key(e.a, e.b), edges_.size()).second)
        throw UsageError("parallel edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
      adjacency_[e.a].push_back({edges_.size(), e.b});
      adjacency_[e.b].push_back({edges_.size(), e.a});
      edges_.push_back(e);
    }
  }

  Graph(std::size_t vertex_count, std::initializer_list<Endpoints> edges)
      : Graph(vertex_count, std::span<const Endpoints>(edges.begin(), edges.size())) {}

  /// Identity shared by copies; edge sets over different identities do not mix.
  std::uint64_t id() const { return id_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const Endpoints& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Endpoints>& edges() const { return edges_; }
  const std::vector<Incidence>& incident(VertexId v) const { return adjacency_.at(v); }
  std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const {
    auto it = lookup_.find(key(a, b));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }
  static std::uint64_t key(VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }

  std::uint64_t id_;
  std::size_t vertex_count_;
  std::vector<Endpoints> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeId> lookup_;
};

/// A set of edges of one graph. The vertex set is implied by the endpoints.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(const Graph& g) : graph_id_(g.id()), bits_(g.edge_count()) {}
  EdgeSet(const Graph& g, std::span<const EdgeId> ids) : EdgeSet(g) {
    for (EdgeId e : ids) insert(e);
  }
  EdgeSet(const Graph& g, std::initializer_list<EdgeId> ids)
      : EdgeSet(g, std::span<const EdgeId>(ids.begin(), ids.size())) {}

  static EdgeSet full(const Graph& g) {
    EdgeSet s(g);
    s.bits_.set();
    return s;
  }

  std::uint64_t graph_id() const { return graph_id_; }
  std::size_t universe() const { return bits_.size(); }
  bool contains(EdgeId e) const { return e < bits_.size() && bits_.test(e); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  void insert(EdgeId e) {
    if (e >= bits_.size()) throw UsageError("edge id out of range");
    bits_.set(e);
  }
  void erase(EdgeId e) {
    if (e >= bits_.size()) throw UsageError("edge id out of range");
    bits_.reset(e);
  }

  std::vector<EdgeId> ids() const {
    std::vector<EdgeId> out;
    out.reserve(size());
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(i);
    return out;
  }

  bool belongs_to(const Graph& g) const {
    return graph_id_ == g.id() && bits_.size() == g.edge_count();
  }

  friend bool operator==(const EdgeSet& x, const EdgeSet& y) {
    return x.graph_id_ == y.graph_id_ && x.bits_ == y.bits_;
  }

  /// Lexicographic order on the ascending id sequences.
  friend bool lex_less(const EdgeSet& x, const EdgeSet& y) {
    auto i = x.bits_.find_first();
    auto j = y.bits_.find_first();
    while (i != Bits::npos && j != Bits::npos) {
      if (i != j) return i < j;
      i = x.bits_.find_next(i);
      j = y.bits_.find_next(j);
    }
    return i == Bits::npos && j != Bits::npos;
  }

  friend EdgeSet sym_diff(const EdgeSet& x, const EdgeSet& y) {
    check_same(x, y);
    EdgeSet out = x;
    out.bits_ ^= y.bits_;
    return out;
  }
  friend EdgeSet set_union(const EdgeSet& x, const EdgeSet& y) {
    check_same(x, y);
    EdgeSet out = x;
    out.bits_ |= y.bits_;
    return out;
  }
  friend EdgeSet set_minus(const EdgeSet& x, const EdgeSet& y) {
    check_same(x, y);
    EdgeSet out = x;
    out.bits_ -= y.bits_;
    return out;
  }
  friend bool is_subset(const EdgeSet& x, const EdgeSet& y) {
    check_same(x, y);
    return x.bits_.is_subset_of(y.bits_);
  }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  static void check_same(const EdgeSet& x, const EdgeSet& y) {
    if (x.graph_id_ != y.graph_id_ || x.bits_.size() != y.bits_.size())
      throw UsageError("edge sets belong to different graphs");
  }

  std::uint64_t graph_id_ = 0;
  Bits bits_;
};

inline std::size_t degree_in(const Graph& g, const EdgeSet& s, VertexId v) {
  if (v >= g.vertex_count()) throw UsageError("vertex id out of range");
  std::size_t d = 0;
  for (const auto& inc : g.incident(v))
    if (s.contains(inc.edge)) ++d;
  return d;
}

inline std::vector<std::size_t> degrees_in(const Graph& g, const EdgeSet& s) {
  std::vector<std::size_t> deg(g.vertex_count(), 0);
  for (EdgeId e : s.ids()) {
    ++deg[g.edge(e).a];
    ++deg[g.edge(e).b];
  }
  return deg;
}

/// Vertices covered by `s`, ascending.
inline std::vector<VertexId> covered_vertices(const Graph& g, const EdgeSet& s) {
  auto deg = degrees_in(g, s);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < deg.size(); ++v)
    if (deg[v] > 0) out.push_back(v);
  return out;
}

/// A walk given by its vertices and the edges between consecutive vertices.
/// A cycle repeats the first vertex at the end.
struct PathDescriptor {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  bool is_cycle() const { return vertices.size() > 1 && vertices.front() == vertices.back(); }
  VertexId front() const { return vertices.front(); }
  VertexId back() const { return vertices.back(); }
};

/// Checks that `p` is a simple path or simple cycle of `g`.
inline bool is_valid_path(const Graph& g, const PathDescriptor& p) {
  if (p.vertices.empty() || p.edges.size() + 1 != p.vertices.size()) return false;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (p.edges[i] >= g.edge_count()) return false;
    const auto& e = g.edge(p.edges[i]);
    if (!((e.a == p.vertices[i] && e.b == p.vertices[i + 1]) ||
          (e.b == p.vertices[i] && e.a == p.vertices[i + 1])))
      return false;
  }
  std::vector<VertexId> inner(p.vertices.begin(), p.vertices.end() - (p.is_cycle() ? 1 : 0));
  std::sort(inner.begin(), inner.end());
  if (std::adjacent_find(inner.begin(), inner.end()) != inner.end()) return false;
  std::vector<EdgeId> es = p.edges;
  std::sort(es.begin(), es.end());
  return std::adjacent_find(es.begin(), es.end()) == es.end();
}

inline EdgeSet edges_of(const Graph& g, const PathDescriptor& p) {
  return EdgeSet(g, std::span<const EdgeId>(p.edges));
}

/// Connected-component label per vertex, restricted to edges in `s` when given.
/// Labels are dense and assigned in order of smallest vertex.
inline std::vector<std::size_t> component_labels(const Graph& g, const EdgeSet* s = nullptr) {
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(g.vertex_count(), kUnset);
  std::size_t next = 0;
  std::vector<VertexId> stack;
  for (VertexId root = 0; root < g.vertex_count(); ++root) {
    if (label[root] != kUnset) continue;
    label[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const auto& inc : g.incident(v)) {
        if (s && !s->contains(inc.edge)) continue;
        if (label[inc.neighbor] == kUnset) {
          label[inc.neighbor] = next;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++next;
  }
  return label;
}

inline bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  auto label = component_labels(g);
  return std::all_of(label.begin(), label.end(), [](std::size_t l) { return l == 0; });
}

namespace detail {

struct LowLink {
  std::vector<std::size_t> order;  // discovery time, 0 = unvisited
  std::vector<std::size_t> low;
  std::vector<bool> is_bridge;
  std::vector<bool> is_cut;
};

// Iterative Tarjan DFS computing bridges and articulation points together.
inline LowLink low_link(const Graph& g) {
  LowLink r;
  const std::size_t n = g.vertex_count();
  r.order.assign(n, 0);
  r.low.assign(n, 0);
  r.is_bridge.assign(g.edge_count(), false);
  r.is_cut.assign(n, false);

  struct Frame {
    VertexId v;
    EdgeId parent_edge;
    std::size_t next;
    std::size_t children;
  };
  constexpr auto kNone = static_cast<EdgeId>(-1);
  std::size_t clock = 0;
  std::vector<Frame> stack;

  for (VertexId root = 0; root < n; ++root) {
    if (r.order[root] != 0) continue;
    r.order[root] = r.low[root] = ++clock;
    stack.push_back({root, kNone, 0, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& adj = g.incident(f.v);
      if (f.next < adj.size()) {
        const Incidence inc = adj[f.next++];
        if (inc.edge == f.parent_edge) continue;
        if (r.order[inc.neighbor] == 0) {
          ++f.children;
          r.order[inc.neighbor] = r.low[inc.neighbor] = ++clock;
          stack.push_back({inc.neighbor, inc.edge, 0, 0});
        } else {
          r.low[f.v] = std::min(r.low[f.v], r.order[inc.neighbor]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children > 1) r.is_cut[done.v] = true;
        continue;
      }
      Frame& parent = stack.back();
      r.low[parent.v] = std::min(r.low[parent.v], r.low[done.v]);
      if (r.low[done.v] > r.order[parent.v]) r.is_bridge[done.parent_edge] = true;
      if (parent.parent_edge != kNone && r.low[done.v] >= r.order[parent.v])
        r.is_cut[parent.v] = true;
    }
  }
  return r;
}

}  // namespace detail

/// Bridge edges in ascending id order.
inline std::vector<EdgeId> bridges(const Graph& g) {
  auto ll = detail::low_link(g);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (ll.is_bridge[e]) out.push_back(e);
  return out;
}

inline std::vector<VertexId> cut_vertices(const Graph& g) {
  auto ll = detail::low_link(g);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (ll.is_cut[v]) out.push_back(v);
  return out;
}

/// More than two vertices, connected, and no cut vertex.
inline bool is_two_connected(const Graph& g) {
  if (g.vertex_count() <= 2 || !is_connected(g)) return false;
  return cut_vertices(g).empty();
}

namespace detail {

// BFS from `source` through vertices with allowed[v]; stops at the first vertex
// satisfying `is_target`. Edge `banned` is never traversed.
template <typename Target>
std::optional<PathDescriptor> bfs_path(const Graph& g, VertexId source,
                                       const std::vector<bool>& allowed, Target is_target,
                                       EdgeId banned = static_cast<EdgeId>(-1)) {
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> via_edge(g.vertex_count(), kNone);
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<VertexId> q;
  seen[source] = true;
  q.push(source);
  std::optional<VertexId> hit;
  while (!q.empty() && !hit) {
    VertexId v = q.front();
    q.pop();
    for (const auto& inc : g.incident(v)) {
      if (inc.edge == banned || seen[inc.neighbor]) continue;
      VertexId w = inc.neighbor;
      if (is_target(w)) {
        seen[w] = true;
        via_edge[w] = inc.edge;
        hit = w;
        break;
      }
      if (!allowed[w]) continue;
      seen[w] = true;
      via_edge[w] = inc.edge;
      q.push(w);
    }
  }
  if (!hit) return std::nullopt;
  PathDescriptor p;
  VertexId cur = *hit;
  p.vertices.push_back(cur);
  while (cur != source) {
    EdgeId e = via_edge[cur];
    p.edges.push_back(e);
    cur = g.edge(e).other(cur);
    p.vertices.push_back(cur);
  }
  std::reverse(p.vertices.begin(), p.vertices.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

}  // namespace detail

/// A simple cycle through `v`, found as a path between two neighbours of `v`
/// that avoids `v`. Returns nullopt when `v` lies on no cycle.
inline std::optional<PathDescriptor> find_cycle_through(const Graph& g, VertexId v) {
  if (v >= g.vertex_count()) throw UsageError("vertex id out of range");
  std::vector<bool> allowed(g.vertex_count(), true);
  allowed[v] = false;
  for (const auto& first : g.incident(v)) {
    std::vector<bool> is_other_neighbor(g.vertex_count(), false);
    for (const auto& inc : g.incident(v))
      if (inc.edge != first.edge) is_other_neighbor[inc.neighbor] = true;
    auto path = detail::bfs_path(g, first.neighbor, allowed,
                                 [&](VertexId w) { return is_other_neighbor[w]; });
    if (!path) continue;
    PathDescriptor cycle;
    cycle.vertices.push_back(v);
    cycle.edges.push_back(first.edge);
    cycle.vertices.insert(cycle.vertices.end(), path->vertices.begin(), path->vertices.end());
    cycle.edges.insert(cycle.edges.end(), path->edges.begin(), path->edges.end());
    cycle.edges.push_back(*g.find_edge(path->back(), v));
    cycle.vertices.push_back(v);
    return cycle;
  }
  return std::nullopt;
}

/// A path from `u` to another vertex of `h`, sharing no edge with `h` and with
/// internal vertices outside `h`. Requires `g` 2-connected, deg_h(u) = 2 and
/// deg_g(u) = 3.
inline PathDescriptor find_escape_path(const Graph& g, const EdgeSet& h, VertexId u) {
  if (!h.belongs_to(g)) throw UsageError("edge set is not over this graph");
  if (u >= g.vertex_count()) throw UsageError("vertex id out of range");
  if (degree_in(g, h, u) != 2 || g.degree(u) != 3)
    throw UsageError("escape path needs deg_h(u) = 2 and deg_g(u) = 3");
  if (!is_two_connected(g)) throw UsageError("escape path needs a 2-connected graph");

  auto hdeg = degrees_in(g, h);
  const Incidence* out = nullptr;
  for (const auto& inc : g.incident(u))
    if (!h.contains(inc.edge)) out = &inc;

  if (hdeg[out->neighbor] > 0) return PathDescriptor{{u, out->neighbor}, {out->edge}};

  std::vector<bool> allowed(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) allowed[v] = hdeg[v] == 0;
  auto tail = detail::bfs_path(g, out->neighbor, allowed,
                               [&](VertexId w) { return hdeg[w] > 0; }, out->edge);
  if (!tail) throw InternalError("2-connected graph without an escape path");
  PathDescriptor p{{u}, {out->edge}};
  p.vertices.insert(p.vertices.end(), tail->vertices.begin(), tail->vertices.end());
  p.edges.insert(p.edges.end(), tail->edges.begin(), tail->edges.end());
  return p;
}

/// A simple cycle through both `a` and `b` (two internally vertex-disjoint
/// a-b paths, via unit-capacity augmenting paths on the split graph).
inline std::optional<PathDescriptor> find_cycle_through_pair(const Graph& g, VertexId a,
                                                             VertexId b) {
  if (a >= g.vertex_count() || b >= g.vertex_count() || a == b)
    throw UsageError("need two distinct vertices");
  // Node 2v is v_in, 2v+1 is v_out; inner arc capacity 1 (unbounded for a, b).
  const std::size_t n = g.vertex_count();
  struct Arc {
    std::size_t to;
    int cap;
    std::size_t rev;
    EdgeId edge;
  };
  constexpr auto kNoEdge = static_cast<EdgeId>(-1);
  std::vector<std::vector<Arc>> net(2 * n);
  auto add = [&](std::size_t x, std::size_t y, int cap, EdgeId e) {
    net[x].push_back({y, cap, net[y].size(), e});
    net[y].push_back({x, 0, net[x].size() - 1, e});
  };
  for (VertexId v = 0; v < n; ++v) add(2 * v, 2 * v + 1, (v == a || v == b) ? 2 : 1, kNoEdge);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& ep = g.edge(e);
    add(2 * ep.a + 1, 2 * ep.b, 1, e);
    add(2 * ep.b + 1, 2 * ep.a, 1, e);
  }
  const std::size_t source = 2 * a + 1;
  const std::size_t sink = 2 * b;
  for (int round = 0; round < 2; ++round) {
    std::vector<std::pair<std::size_t, std::size_t>> prev(2 * n, {SIZE_MAX, SIZE_MAX});
    std::queue<std::size_t> q;
    q.push(source);
    prev[source] = {source, 0};
    while (!q.empty() && prev[sink].first == SIZE_MAX) {
      std::size_t x = q.front();
      q.pop();
      for (std::size_t i = 0; i < net[x].size(); ++i) {
        const Arc& arc = net[x][i];
        if (arc.cap > 0 && prev[arc.to].first == SIZE_MAX) {
          prev[arc.to] = {x, i};
          q.push(arc.to);
        }
      }
    }
    if (prev[sink].first == SIZE_MAX) return std::nullopt;
    for (std::size_t y = sink; y != source;) {
      auto [x, i] = prev[y];
      net[x][i].cap -= 1;
      net[y][net[x][i].rev].cap += 1;
      y = x;
    }
  }
  // Read off the two paths along saturated edge arcs, then splice them.
  auto walk = [&](std::size_t start_arc) {
    PathDescriptor p{{a}, {}};
    std::size_t x = source;
    std::size_t idx = start_arc;
    while (true) {
      Arc& arc = net[x][idx];
      arc.cap += 1;  // consume so the second walk takes the other route
      p.edges.push_back(arc.edge);
      VertexId v = arc.to / 2;
      p.vertices.push_back(v);
      if (v == b) break;
      x = 2 * v + 1;
      idx = SIZE_MAX;
      for (std::size_t i = 0; i < net[x].size(); ++i) {
        const Arc& out = net[x][i];
        if (out.edge != kNoEdge && out.to % 2 == 0 && out.cap == 0 &&
            net[out.to][out.rev].cap == 1) {
          idx = i;
          break;
        }
      }
      if (idx == SIZE_MAX) throw InternalError("broken flow path");
    }
    return p;
  };
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < net[source].size(); ++i) {
    const Arc& out = net[source][i];
    if (out.edge != kNoEdge && out.to % 2 == 0 && out.cap == 0 && net[out.to][out.rev].cap == 1)
      starts.push_back(i);
  }
  if (starts.size() != 2) return std::nullopt;
  PathDescriptor first = walk(starts[0]);
  PathDescriptor second = walk(starts[1]);
  PathDescriptor cycle = first;
  for (std::size_t i = second.edges.size(); i-- > 0;) {
    cycle.edges.push_back(second.edges[i]);
    cycle.vertices.push_back(second.vertices[i]);
  }
  return cycle;
}

/// Result of turning a multigraph into a simple graph by subdividing edges.
struct Subdivision {
  Graph graph;
  std::vector<std::size_t> origin;  // new edge -> index of the multigraph edge
  std::size_t original_vertex_count = 0;
};

/// Replaces multigraph edge i by a path of pieces[i] edges through fresh
/// degree-2 vertices (numbered after the original ones, in edge order).
inline Subdivision subdivide(std::size_t vertex_count, std::span<const Endpoints> multi_edges,
                             std::span<const std::size_t> pieces) {
  if (pieces.size() != multi_edges.size()) throw UsageError("one piece count per edge");
  std::vector<Endpoints> edges;
  std::vector<std::size_t> origin;
  std::size_t next = vertex_count;
  for (std::size_t i = 0; i < multi_edges.size(); ++i) {
    if (pieces[i] == 0) throw UsageError("piece count must be positive");
    VertexId prev = multi_edges[i].a;
    for (std::size_t k = 1; k < pieces[i]; ++k) {
      edges.push_back({prev, next});
      origin.push_back(i);
      prev = next++;
    }
    edges.push_back({prev, multi_edges[i].b});
    origin.push_back(i);
  }
  return Subdivision{Graph(next, edges), std::move(origin), vertex_count};
}

}  // namespace factorum
