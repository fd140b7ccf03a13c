#include <gtest/gtest.h>

#include <algorithm>

#include "factorum/generators.hpp"
#include "factorum/solver.hpp"

using namespace factorum;

TEST(Solver, TwoTriangleExample) {
  const TwoTriangles fig = two_triangles_instance();
  EXPECT_EQ(fig.instance.edge_count(), 14u);
  EXPECT_EQ(fig.instance.vertex_count(), 12u);
  SolveOptions opt;
  opt.trace = true;
  for (const char* backend : {"matching", "brute"}) {
    auto r = main_solve(fig.instance, backend, opt);
    ASSERT_TRUE(r.outcome) << backend;
    EXPECT_EQ(r.outcome->weight, 6) << backend;
    EXPECT_EQ(r.outcome->edges, EdgeSet::full(fig.instance.graph())) << backend;
    EXPECT_TRUE(within_bounds(r.stats, 12));
    EXPECT_FALSE(r.trace.empty());
  }
}

TEST(Solver, InfeasibleAndEmpty) {
  Graph tri(3, {{0, 1}, {1, 2}, {0, 2}});
  Instance inst(tri, std::vector<DegreeConstraint>(3, DegreeConstraint::of(2, {1})),
                std::vector<Rational>(3, Rational(1)));
  EXPECT_FALSE(main_solve(inst).outcome);
  Instance empty(Graph(2, std::initializer_list<Endpoints>{}),
                 {DegreeConstraint::of(0, {0}), DegreeConstraint::of(0, {0})}, {});
  auto r = main_solve(empty);
  ASSERT_TRUE(r.outcome);
  EXPECT_TRUE(r.outcome->edges.empty());
}

TEST(Solver, RejectsInadmissibleConstraints) {
  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  Instance gap(star,
               {DegreeConstraint::of(3, {0, 3}), DegreeConstraint::of(1, {0, 1}),
                DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(1, {0, 1})},
               {Rational(1), Rational(1), Rational(1)});
  EXPECT_THROW(main_solve(gap), UsageError);
}

TEST(Solver, MatchesBruteForceWithinCountingBounds) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenParams p;
    p.n = 3 + seed % 7;
    p.m = std::min<std::size_t>(p.n * (p.n - 1) / 2, 3 + seed % 12);
    auto inst = random_instance(seed, p);
    auto r = main_solve(inst);
    auto b = brute_force_opt(inst);
    ASSERT_EQ(r.outcome.has_value(), b.has_value()) << "seed " << seed;
    if (b) {
      EXPECT_EQ(r.outcome->weight, b->weight) << "seed " << seed;
    }
    EXPECT_TRUE(within_bounds(r.stats, inst.vertex_count())) << "seed " << seed;
    EXPECT_LE(r.stats.recursion_depth, t_set(inst).size()) << "seed " << seed;
  }
}

TEST(Solver, CountingBoundFormula) {
  auto b = counting_bounds(5);
  EXPECT_EQ(b.dec_calls, 5u);
  EXPECT_EQ(b.opt_calls, 16u);
  EXPECT_EQ(b.comparisons, 15u);
  EXPECT_EQ(b.recursion_depth, 5u);
}

TEST(Solver, ImprovementLoopSatisfiesCriterion) {
  std::size_t tested = 0;
  for (std::uint64_t seed = 0; seed < 400 && tested < 120; ++seed) {
    GenParams p;
    p.n = 3 + seed % 6;
    p.m = std::min<std::size_t>(p.n * (p.n - 1) / 2, 3 + seed % 10);
    auto inst = random_instance(seed, p);
    const auto t = t_set(inst);
    if (t.empty()) continue;
    const VertexId u = t.front();
    // an optimum of the D^0 branch seeds the loop, as in the recursion
    {
      auto sub = brute_force_opt(restrict_parity(inst, u, 0));
      if (!sub) continue;
      auto oracles = OracleHandle::named("brute");
      Factor f = make_factor(inst, sub->edges);
      Factor cand = improvement_loop(inst, u, f, oracles);
      EXPECT_TRUE(is_factor(inst, cand.edges));
      EXPECT_TRUE(check_optimality_criterion(inst, u, f, cand)) << "seed " << seed;
      auto best = brute_force_opt(inst);
      ASSERT_TRUE(best);
      EXPECT_EQ(cand.weight, best->weight) << "seed " << seed;
      ++tested;
    }
  }
  EXPECT_GT(tested, 50u);
}

TEST(Solver, CriterionRejectsSuboptimalCandidates) {
  const TwoTriangles fig = two_triangles_instance();
  const Instance& inst = fig.instance;
  Factor empty = make_factor(inst, EdgeSet(inst.graph()));
  Factor full = make_factor(inst, EdgeSet::full(inst.graph()));
  EXPECT_TRUE(check_optimality_criterion(inst, fig.u, empty, full));
  EXPECT_FALSE(check_optimality_criterion(inst, fig.u, full, empty));
  EXPECT_THROW(check_optimality_criterion(inst, 5, empty, full), UsageError);
}
