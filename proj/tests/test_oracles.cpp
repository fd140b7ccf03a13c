#include <gtest/gtest.h>

#include <algorithm>

#include <random>

#include "factorum/generators.hpp"
#include "factorum/oracles.hpp"
#include "factorum/realizability.hpp"

using namespace factorum;

namespace {

GenParams g_only(std::size_t n, std::size_t m) {
  GenParams p;
  p.n = n;
  p.m = std::min(m, n * (n - 1) / 2);
  p.families = parse_families("interval,parity");
  return p;
}

}  // namespace

TEST(Oracles, GadgetsRealizeTheirConstraint) {
  for (unsigned d = 0; d <= 5; ++d)
    for (unsigned g = 0; g <= d; ++g)
      for (unsigned f = g; f <= d; ++f) {
        EXPECT_EQ(realized_set(build_interval_gadget(g, f, d)), DegreeConstraint::range(d, g, f, 1));
        if ((f - g) % 2 == 0) {
          EXPECT_EQ(realized_set(build_parity_gadget(g, f, d)), DegreeConstraint::range(d, g, f, 2));
        }
      }
  EXPECT_THROW(gadget_for(DegreeConstraint::of(3, {0, 1, 3})), UsageError);
}

TEST(Oracles, ReductionAgreesWithBruteForce) {
  std::size_t feasible = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto inst = random_instance(seed, g_only(3 + seed % 6, 3 + seed % 10));
    auto a = opt_matching_backend(inst);
    auto b = brute_force_opt(inst);
    ASSERT_EQ(a.has_value(), b.has_value()) << "seed " << seed;
    if (!a) continue;
    ++feasible;
    EXPECT_EQ(a->weight, b->weight) << "seed " << seed;
    EXPECT_TRUE(is_factor(inst, a->edges));
  }
  EXPECT_GT(feasible, 100u);
}

TEST(Oracles, ReductionShape) {
  Graph g(2, {{0, 1}});
  Instance inst(g, {DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(1, {1})}, {Rational(-3)});
  auto r = reduce_instance(inst);
  EXPECT_EQ(r.problem.graph.vertex_count() % 2, 0u);
  EXPECT_EQ(r.problem.weights[r.middle_edge[0]], Rational(-3));
  auto f = opt_matching_backend(inst);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->weight, -3);
  EXPECT_THROW(opt_matching_backend(Instance(Graph(4, {{0, 1}, {0, 2}, {0, 3}}),
                                             {DegreeConstraint::of(3, {0, 1, 3}), DegreeConstraint::of(1, {0, 1}),
                                              DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(1, {0, 1})},
                                             {Rational(1), Rational(1), Rational(1)})),
               UsageError);
}

TEST(Oracles, DecisionBackendFindsAFactorIffOneExists) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenParams p;
    p.n = 3 + seed % 6;
    p.m = std::min<std::size_t>(p.n * (p.n - 1) / 2, 3 + seed % 10);
    auto inst = random_instance(seed, p);
    auto d = decision_split_backend(inst);
    auto b = brute_force_opt(inst);
    ASSERT_EQ(d.has_value(), b.has_value()) << "seed " << seed;
    if (d) {
      EXPECT_TRUE(is_factor(inst, d->edges));
    }
  }
}

TEST(Oracles, DecisionCapIsEnforced) {
  Graph g(4, {{0, 1}, {0, 2}, {0, 3}});
  Instance inst(g,
                {DegreeConstraint::of(3, {0, 1, 3}), DegreeConstraint::of(1, {0, 1}),
                 DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(1, {0, 1})},
                {Rational(1), Rational(1), Rational(1)});
  EXPECT_THROW(decision_split_backend(inst, 0), CapacityError);
  EXPECT_TRUE(decision_split_backend(inst, 1));
}

TEST(Oracles, HandleCountsCalls) {
  auto h = OracleHandle::named("brute");
  Graph g(2, {{0, 1}});
  Instance inst(g, {DegreeConstraint::of(1, {1}), DegreeConstraint::of(1, {1})}, {Rational(2)});
  h.decision(inst);
  h.optimization(inst);
  h.optimization(inst);
  EXPECT_EQ(h.dec_calls(), 1u);
  EXPECT_EQ(h.opt_calls(), 2u);
  h.reset_counters();
  EXPECT_EQ(h.opt_calls(), 0u);
  EXPECT_THROW(OracleHandle::named("nope"), UsageError);
}
