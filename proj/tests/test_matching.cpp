#include <gtest/gtest.h>

#include <random>

#include "factorum/generators.hpp"
#include "factorum/matching.hpp"

using namespace factorum;

namespace {

MatchingProblem random_problem(std::uint64_t seed, std::size_t n, std::size_t m, int lo, int hi) {
  std::mt19937_64 rng(seed);
  Graph g = detail::random_simple_graph(rng, n, std::min(m, n * (n - 1) / 2));
  std::uniform_int_distribution<int> w(lo, hi);
  std::vector<Rational> ws;
  for (EdgeId e = 0; e < g.edge_count(); ++e) ws.emplace_back(w(rng), 1 + static_cast<int>(rng() % 3));
  return {std::move(g), std::move(ws)};
}

}  // namespace

TEST(Matching, SquareAndNoPerfectMatching) {
  Graph sq(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  std::vector<Rational> w{Rational(1), Rational(5), Rational(1), Rational(5)};
  auto m = max_weight_perfect_matching(sq, w);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->weight, 10);
  EXPECT_EQ(m->edges.ids(), (std::vector<EdgeId>{1, 3}));
  EXPECT_FALSE(max_weight_perfect_matching(Graph(3, {{0, 1}, {1, 2}, {0, 2}}),
                                           std::vector<Rational>(3, Rational(1))));
  EXPECT_THROW(max_weight_perfect_matching(sq, std::vector<Rational>(2)), UsageError);
}

TEST(Matching, BlossomNeeded) {
  // odd cycle 0..4 with a pendant at 0: the heavy cycle edges form a blossom
  Graph g(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}});
  std::vector<Rational> w{Rational(9), Rational(9), Rational(1), Rational(1), Rational(9), Rational(1)};
  auto m = max_weight_perfect_matching(g, w);
  auto b = brute_force_perfect_matching(g, w);
  ASSERT_TRUE(m && b);
  EXPECT_EQ(m->weight, b->weight);
  EXPECT_TRUE(verify_matching(g, w, *m));
}

TEST(Matching, AgreesWithExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    const std::size_t n = 2 + 2 * (seed % 6);
    auto p = random_problem(seed, n, n + seed % 15, -6, 9);
    auto m = max_weight_perfect_matching(p);
    auto b = brute_force_perfect_matching(p.graph, p.weights);
    ASSERT_EQ(m.has_value(), b.has_value()) << "seed " << seed;
    if (!m) continue;
    EXPECT_EQ(m->weight, b->weight) << "seed " << seed;
    EXPECT_TRUE(verify_matching(p, *m)) << "seed " << seed;
  }
}

TEST(Matching, LexicographicTiesPickSmallestEdgeSet) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 2 + 2 * (seed % 5);
    auto p = random_problem(seed, n, n + seed % 12, 0, 2);  // many ties
    MatchingOptions opt;
    opt.lexicographic_ties = true;
    auto m = max_weight_perfect_matching(p, opt);
    auto b = brute_force_perfect_matching(p.graph, p.weights);
    ASSERT_EQ(m.has_value(), b.has_value());
    if (!m) continue;
    EXPECT_EQ(m->edges, b->edges) << "seed " << seed;
  }
}

TEST(Matching, HugeWeightsStayExact) {
  Graph sq(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const Rational big = Rational(BigInt(1) << 200);
  std::vector<Rational> w{big, big + Rational(1, 7), big, big};
  auto m = max_weight_perfect_matching(sq, w);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->weight, 2 * big + Rational(1, 7));
  EXPECT_EQ(m->edges.ids(), (std::vector<EdgeId>{1, 3}));
}

TEST(Matching, VerifyRejectsBadMatchings) {
  Graph sq(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  std::vector<Rational> w(4, Rational(1));
  EXPECT_FALSE(verify_matching(sq, w, Matching{EdgeSet(sq, {0, 1}), Rational(2)}));
  EXPECT_FALSE(verify_matching(sq, w, Matching{EdgeSet(sq, {0, 2}), Rational(3)}));
  EXPECT_TRUE(verify_matching(sq, w, Matching{EdgeSet(sq, {0, 2}), Rational(2)}));
}
