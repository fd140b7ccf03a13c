#include <gtest/gtest.h>

#include <random>

#include "factorum/generators.hpp"
#include "factorum/structural.hpp"
#include "factorum/verify_suites.hpp"

using namespace factorum;

namespace {

DegreeConstraint label(const Graph& g, VertexId v, bool type1 = true) {
  switch (g.degree(v)) {
    case 1: return DegreeConstraint::of(1, {0, 1});
    case 2: return DegreeConstraint::of(2, {0, 2});
    default: return type1 ? kTypeOneLabel() : kTypeTwoLabel();
  }
}

Instance key_of(Graph g, std::vector<bool> type1 = {}) {
  std::vector<DegreeConstraint> cs;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    cs.push_back(label(g, v, v < type1.size() ? type1[v] : true));
  std::vector<Rational> ws(g.edge_count(), Rational(1));
  return Instance(std::move(g), std::move(cs), std::move(ws));
}

}  // namespace

TEST(Structural, KeyInstanceRecognition) {
  auto k = key_of(Graph(3, {{0, 1}, {1, 2}}));
  EXPECT_TRUE(is_key_instance(k));
  EXPECT_FALSE(is_key_instance(k.with_constraint(1, DegreeConstraint::of(2, {0, 1, 2}))));
  EXPECT_FALSE(is_key_instance(key_of(Graph(3, {{0, 1}}))));  // isolated vertex
}

TEST(Structural, ClassifiesTheFiveShapes) {
  // path 0-1-2
  auto path = key_of(Graph(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(classify_basic(path, EdgeSet::full(path.graph())), BasicShape::Path);
  // triangle
  auto cyc = key_of(Graph(3, {{0, 1}, {1, 2}, {2, 0}}));
  EXPECT_EQ(classify_basic(cyc, EdgeSet::full(cyc.graph())), BasicShape::Cycle);
  // triangle with a tail at 0
  auto tad = key_of(Graph(4, {{0, 1}, {1, 2}, {2, 0}, {0, 3}}));
  EXPECT_EQ(classify_basic(tad, EdgeSet::full(tad.graph())), BasicShape::Tadpole);
  // two triangles joined by the bridge 0-3
  auto dumb = key_of(Graph(6, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 5}, {5, 3}}));
  EXPECT_EQ(classify_basic(dumb, EdgeSet::full(dumb.graph())), BasicShape::Dumbbell);
  // K4 minus an edge: theta between 0 and 2, basic only with mixed types
  Graph th(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
  auto mixed = key_of(th, {true, true, false, true});
  EXPECT_EQ(classify_basic(mixed, EdgeSet::full(mixed.graph())), BasicShape::Theta);
  auto same = key_of(th, {true, true, true, true});
  EXPECT_FALSE(classify_basic(same, EdgeSet::full(same.graph())));
  // two disjoint edges are not connected
  auto two = key_of(Graph(4, {{0, 1}, {2, 3}}));
  EXPECT_FALSE(classify_basic(two, EdgeSet::full(two.graph())));
  EXPECT_FALSE(classify_basic(two, EdgeSet(two.graph())));
  EXPECT_THROW(classify_basic(path, EdgeSet(path.graph(), {0})), UsageError);
}

TEST(Structural, NormalizationSplitsIntervalAndPairsParity) {
  Graph p(3, {{0, 1}, {1, 2}});
  Instance interval(p,
                    {DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(2, {0, 1, 2}),
                     DegreeConstraint::of(1, {0, 1})},
                    {Rational(2), Rational(-1)});
  auto a = normalize(interval, EdgeSet(p), EdgeSet::full(p));
  EXPECT_TRUE(is_key_instance(a.key));
  EXPECT_EQ(a.key.vertex_count(), 4u);
  EXPECT_EQ(a.key.edge_count(), 2u);
  EXPECT_EQ(a.expansion[1].size(), 2u);

  Instance parity = interval.with_constraint(1, DegreeConstraint::of(2, {0, 2}));
  auto b = normalize(parity, EdgeSet(p), EdgeSet::full(p));
  EXPECT_TRUE(is_key_instance(b.key));
  EXPECT_EQ(b.key.vertex_count(), 3u);
  EXPECT_EQ(b.key.edge_count(), 2u);
  EXPECT_EQ(b.key.weight_of(EdgeSet::full(b.key.graph())), 1);

  // edges of f enter with negated weight
  auto c = normalize(parity, EdgeSet::full(p), EdgeSet(p));
  EXPECT_EQ(c.key.weight_of(EdgeSet::full(c.key.graph())), -1);
}

TEST(Structural, NormalizationInvariants) {
  std::size_t tested = 0;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    auto triple = verify_detail::random_pair(seed);
    if (!triple) continue;
    auto& [inst, f, g] = *triple;
    auto norm = normalize(inst, f, g);
    ++tested;
    ASSERT_TRUE(is_key_instance(norm.key)) << "seed " << seed;
    EXPECT_EQ(norm.key.weight_of(EdgeSet::full(norm.key.graph())), inst.weight_of(g) - inst.weight_of(f));
    const auto delta = sym_diff(f, g);
    EXPECT_EQ(norm.key.edge_count(), delta.size());
    for (EdgeId k = 0; k < norm.key.edge_count(); ++k) {
      const EdgeId e = norm.key_to_original[k];
      EXPECT_TRUE(delta.contains(e));
      EXPECT_EQ(norm.original_to_key[e], std::optional<EdgeId>(k));
      EXPECT_EQ(norm.key.weight(k), g.contains(e) ? inst.weight(e) : -inst.weight(e));
    }
    for (VertexId v = 0; v < inst.vertex_count(); ++v) {
      std::size_t sum = 0;
      for (VertexId x : norm.expansion[v]) {
        sum += norm.key.graph().degree(x);
        EXPECT_EQ(norm.key_vertex_origin[x], v);
      }
      EXPECT_EQ(sum, degree_in(inst.graph(), delta, v)) << "seed " << seed;
    }
  }
  EXPECT_GT(tested, 200u);
}

TEST(Structural, PositiveSearchIsBasicAndListed) {
  std::mt19937_64 rng(11);
  std::size_t tested = 0;
  for (int it = 0; it < 1500; ++it) {
    auto key = random_key_instance(rng, 3 + it % 9, 2 + it % 12, -3, 5);
    if (!(key.weight_of(EdgeSet::full(key.graph())) > 0)) {
      EXPECT_THROW(find_positive_basic_factor(key), UsageError);
      continue;
    }
    ++tested;
    const BasicFactor bf = find_positive_basic_factor(key);
    EXPECT_GT(bf.weight, 0);
    bool listed = false;
    for (const auto& b : enumerate_basic_factors(key)) listed |= b.edges == bf.edges && b.shape == bf.shape;
    EXPECT_TRUE(listed) << "iteration " << it;
  }
  EXPECT_GT(tested, 500u);
}

TEST(Structural, LiftGivesABasicAugmentingSubgraph) {
  std::size_t tested = 0;
  for (std::uint64_t seed = 0; seed < 1500 && tested < 150; ++seed) {
    auto triple = verify_detail::random_pair(seed);
    if (!triple) continue;
    auto& [inst, f, g] = *triple;
    if (!(inst.weight_of(g) > inst.weight_of(f))) continue;
    auto norm = normalize(inst, f, g);
    const EdgeSet h = lift_basic_subgraph(norm, find_positive_basic_factor(norm.key));
    EXPECT_TRUE(is_basic_subgraph(inst, f, g, h)) << "seed " << seed;
    ++tested;
  }
  EXPECT_GT(tested, 100u);
}

TEST(Structural, EvenAtUUnderHypotheses) {
  std::mt19937_64 rng(23);
  std::size_t tested = 0;
  for (int it = 0; it < 3000; ++it) {
    auto key = random_key_instance(rng, 4 + it % 8, 3 + it % 10, -2, 6);
    const Rational total = key.weight_of(EdgeSet::full(key.graph()));
    if (!(total > 0)) continue;
    bool dominated = true;
    for (const auto& b : enumerate_basic_factors(key)) dominated &= b.weight < total;
    for (VertexId u = 0; u < key.vertex_count(); ++u) {
      const auto d = key.graph().degree(u);
      const bool u_ok = d == 1 || (d == 3 && is_type2(key, u));
      if (!dominated || !u_ok) {
        EXPECT_THROW(find_even_at_u_basic_factor(key, u), UsageError);
        continue;
      }
      ++tested;
      const BasicFactor bf = find_even_at_u_basic_factor(key, u);
      EXPECT_GT(bf.weight, 0);
      EXPECT_EQ(degree_in(key.graph(), bf.edges, u) % 2, 0u);
    }
  }
  EXPECT_GT(tested, 200u);
}

TEST(Structural, TwoTriangleExampleHasNoEvenBasicFactorAtU) {
  const TwoTriangles fig = two_triangles_instance();
  ASSERT_TRUE(is_key_instance(fig.instance));
  const auto basics = enumerate_basic_factors(fig.instance);
  EXPECT_EQ(basics.size(), 8u);
  for (const auto& b : basics) EXPECT_EQ(degree_in(fig.instance.graph(), b.edges, fig.u) % 2, 1u);
  EXPECT_FALSE(best_even_at_u_basic_factor(fig.instance, fig.u));
  // u is type-1, so the hypotheses do not hold there
  EXPECT_THROW(find_even_at_u_basic_factor(fig.instance, fig.u), UsageError);
}
