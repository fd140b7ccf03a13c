#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "factorum/generators.hpp"
#include "factorum/graph.hpp"

using namespace factorum;

namespace {

Graph random_graph(std::uint64_t seed, std::size_t n, std::size_t m) {
  std::mt19937_64 rng(seed);
  return detail::random_simple_graph(rng, n, std::min(m, n * (n - 1) / 2));
}

std::size_t components(const Graph& g, const EdgeSet* s = nullptr) {
  auto label = component_labels(g, s);
  std::size_t k = 0;
  for (auto x : label) k = std::max(k, x + 1);
  return k;
}

}  // namespace

TEST(Graph, RejectsLoopsParallelEdgesAndRange) {
  EXPECT_THROW(Graph(2, {{0, 0}}), UsageError);
  EXPECT_THROW(Graph(2, {{0, 1}, {1, 0}}), UsageError);
  EXPECT_THROW(Graph(2, {{0, 2}}), UsageError);
  Graph g(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.find_edge(2, 1), std::optional<EdgeId>(1));
  EXPECT_FALSE(g.find_edge(0, 2));
}

TEST(Graph, EdgeSetAlgebraChecksOwnership) {
  Graph g(3, {{0, 1}, {1, 2}, {0, 2}});
  Graph h(3, {{0, 1}, {1, 2}, {0, 2}});
  EdgeSet a(g, {0, 1});
  EdgeSet b(g, {1, 2});
  EXPECT_EQ(sym_diff(a, b).ids(), (std::vector<EdgeId>{0, 2}));
  EXPECT_EQ(set_union(a, b).size(), 3u);
  EXPECT_EQ(set_minus(a, b).ids(), (std::vector<EdgeId>{0}));
  EXPECT_TRUE(is_subset(EdgeSet(g, {1}), a));
  EXPECT_THROW(sym_diff(a, EdgeSet(h, {0})), UsageError);
  Graph copy = g;
  EXPECT_TRUE(a.belongs_to(copy));
}

TEST(Graph, BridgesMatchEdgeRemoval) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Graph g = random_graph(seed, 3 + seed % 8, 2 + seed % 12);
    const std::size_t base = components(g);
    std::vector<EdgeId> expected;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      EdgeSet rest = EdgeSet::full(g);
      rest.erase(e);
      if (components(g, &rest) > base) expected.push_back(e);
    }
    EXPECT_EQ(bridges(g), expected) << "seed " << seed;
  }
}

TEST(Graph, CutVerticesMatchVertexRemoval) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Graph g = random_graph(seed, 3 + seed % 8, 2 + seed % 12);
    std::vector<VertexId> expected;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      // components among the other vertices, with and without v's edges
      EdgeSet without(g);
      for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (g.edge(e).a != v && g.edge(e).b != v) without.insert(e);
      auto before = component_labels(g);
      auto after = component_labels(g, &without);
      std::set<std::size_t> old_comps;
      std::set<std::size_t> new_comps;
      for (VertexId x = 0; x < g.vertex_count(); ++x) {
        if (x == v) continue;
        if (before[x] == before[v]) {
          old_comps.insert(before[x]);
          new_comps.insert(after[x]);
        }
      }
      if (new_comps.size() > old_comps.size()) expected.push_back(v);
    }
    EXPECT_EQ(cut_vertices(g), expected) << "seed " << seed;
  }
}

TEST(Graph, TwoConnectivity) {
  EXPECT_TRUE(is_two_connected(Graph(3, {{0, 1}, {1, 2}, {2, 0}})));
  EXPECT_FALSE(is_two_connected(Graph(3, {{0, 1}, {1, 2}})));
  EXPECT_FALSE(is_two_connected(Graph(2, {{0, 1}})));
  // two triangles sharing a vertex
  EXPECT_FALSE(is_two_connected(Graph(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}})));
}

TEST(Graph, CycleThroughVertexIsValid) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Graph g = random_graph(seed, 4 + seed % 7, 4 + seed % 14);
    const auto br = bridges(g);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      auto c = find_cycle_through(g, v);
      bool on_cycle_edge = false;
      for (const auto& inc : g.incident(v))
        on_cycle_edge |= std::find(br.begin(), br.end(), inc.edge) == br.end();
      EXPECT_EQ(c.has_value(), on_cycle_edge) << "seed " << seed << " v " << v;
      if (!c) continue;
      EXPECT_TRUE(is_valid_path(g, *c));
      EXPECT_TRUE(c->is_cycle());
      EXPECT_EQ(c->front(), v);
    }
  }
}

TEST(Graph, CycleThroughPairInTwoConnectedGraphs) {
  std::size_t tested = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Graph g = random_graph(seed, 4 + seed % 7, 6 + seed % 12);
    if (!is_two_connected(g)) continue;
    ++tested;
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (VertexId b = a + 1; b < g.vertex_count(); ++b) {
        auto c = find_cycle_through_pair(g, a, b);
        ASSERT_TRUE(c) << "seed " << seed;
        EXPECT_TRUE(is_valid_path(g, *c));
        EXPECT_TRUE(c->is_cycle());
        EXPECT_EQ(c->front(), a);
        EXPECT_NE(std::find(c->vertices.begin(), c->vertices.end(), b), c->vertices.end());
      }
  }
  EXPECT_GT(tested, 50u);
}

TEST(Graph, EscapePathLeavesAndReturns) {
  // K4: cycle 0-1-2-3-0 leaves chords 0-2 and 1-3
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {1, 3}});
  EdgeSet h(g, {0, 1, 2, 3});
  auto p = find_escape_path(g, h, 0);
  EXPECT_EQ(p.front(), 0u);
  EXPECT_EQ(p.back(), 2u);
  EXPECT_EQ(p.edges, (std::vector<EdgeId>{4}));
  EXPECT_THROW(find_escape_path(Graph(3, {{0, 1}, {1, 2}}), EdgeSet(Graph(3, {{0, 1}}), {0}), 0),
               UsageError);
}

TEST(Graph, EscapePathsInSubcubicTwoConnectedGraphs) {
  std::mt19937_64 rng(5);
  std::size_t tested = 0;
  for (int it = 0; it < 500; ++it) {
    auto inst = random_key_instance(rng, 4 + it % 10, 6 + it % 12);
    const Graph& g = inst.graph();
    if (!is_two_connected(g)) continue;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (g.degree(v) != 3) continue;
      auto c = find_cycle_through(g, v);
      ASSERT_TRUE(c);
      const EdgeSet h = edges_of(g, *c);
      auto p = find_escape_path(g, h, v);
      ++tested;
      EXPECT_TRUE(is_valid_path(g, p));
      EXPECT_FALSE(p.is_cycle());
      auto hdeg = degrees_in(g, h);
      EXPECT_GT(hdeg[p.back()], 0u);
      for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) EXPECT_EQ(hdeg[p.vertices[i]], 0u);
      for (EdgeId e : p.edges) EXPECT_FALSE(h.contains(e));
      break;
    }
  }
  EXPECT_GT(tested, 50u);
}

TEST(Graph, SubdivideNumbersNewVerticesAfterOriginals) {
  const std::vector<Endpoints> pieces{{0, 1}, {0, 1}, {1, 1}};
  const std::vector<std::size_t> lengths{1, 2, 3};
  Subdivision s = subdivide(2, pieces, lengths);
  EXPECT_EQ(s.graph.vertex_count(), 2u + 0 + 1 + 2);
  EXPECT_EQ(s.graph.edge_count(), 6u);
  EXPECT_EQ(s.origin, (std::vector<std::size_t>{0, 1, 1, 2, 2, 2}));
  EXPECT_EQ(s.graph.degree(1), 4u);
}
