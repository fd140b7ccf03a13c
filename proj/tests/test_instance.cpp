#include <gtest/gtest.h>

#include <random>

#include "factorum/generators.hpp"
#include "factorum/instance.hpp"

using namespace factorum;

namespace {

// Plain 2^m scan, lexicographically smallest among the heaviest.
std::optional<Factor> naive_opt(const Instance& inst) {
  std::optional<Factor> best;
  const std::size_t m = inst.edge_count();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    EdgeSet s(inst.graph());
    for (EdgeId e = 0; e < m; ++e)
      if ((bits >> e) & 1) s.insert(e);
    if (!is_factor(inst, s)) continue;
    Factor f = make_factor(inst, s);
    if (!best || f.weight > best->weight ||
        (f.weight == best->weight && lex_less(f.edges, best->edges)))
      best = f;
  }
  return best;
}

Instance path3() {
  Graph g(3, {{0, 1}, {1, 2}});
  return Instance(std::move(g),
                  {DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(2, {0, 2}),
                   DegreeConstraint::of(1, {1})},
                  {Rational(2), Rational(-1)});
}

}  // namespace

TEST(Instance, ValidateFlagsArityAndFamilies) {
  Graph g(2, {{0, 1}});
  Instance bad_arity(g, {DegreeConstraint::of(2, {0}), DegreeConstraint::of(1, {1})}, {Rational(1)});
  EXPECT_FALSE(validate(bad_arity).valid());
  EXPECT_THROW(require_valid(bad_arity), UsageError);

  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  Instance gap(star,
               {DegreeConstraint::of(3, {0, 3}), DegreeConstraint::of(1, {0, 1}),
                DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(1, {0, 1})},
               {Rational(1), Rational(1), Rational(1)});
  EXPECT_TRUE(validate(gap).valid());
  EXPECT_FALSE(validate(gap).admissible());
  EXPECT_EQ(validate(gap).inadmissible, (std::vector<VertexId>{0}));
  // brute force accepts any valid constraint
  auto best = brute_force_opt(gap);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->weight, 3);
}

TEST(Instance, IsolatedVertexFeasibleIffZeroAllowed) {
  Instance ok(Graph(1, std::initializer_list<Endpoints>{}), {DegreeConstraint::of(0, {0})}, {});
  auto f = brute_force_opt(ok);
  ASSERT_TRUE(f);
  EXPECT_TRUE(f->edges.empty());
}

TEST(Instance, FactorChecks) {
  Instance inst = path3();
  EXPECT_FALSE(is_factor(inst, EdgeSet(inst.graph())));
  EXPECT_EQ(first_violation(inst, EdgeSet(inst.graph())), std::optional<VertexId>(2));
  EXPECT_TRUE(is_factor(inst, EdgeSet::full(inst.graph())));
  auto best = brute_force_opt(inst);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->weight, 1);
}

TEST(Instance, BruteForceMatchesPlainScan) {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    GenParams p;
    p.n = 3 + seed % 6;
    p.m = std::min<std::size_t>(p.n * (p.n - 1) / 2, 2 + seed % 11);
    auto inst = random_instance(seed, p);
    auto a = brute_force_opt(inst);
    auto b = naive_opt(inst);
    ASSERT_EQ(a.has_value(), b.has_value()) << "seed " << seed;
    if (a) {
      EXPECT_EQ(a->weight, b->weight) << "seed " << seed;
      EXPECT_EQ(a->edges, b->edges) << "seed " << seed;
    }
    std::size_t count = 0;
    for_each_factor(inst, [&](const EdgeSet& s) {
      EXPECT_TRUE(is_factor(inst, s));
      ++count;
      return true;
    });
    std::size_t naive_count = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << inst.edge_count()); ++bits) {
      EdgeSet s(inst.graph());
      for (EdgeId e = 0; e < inst.edge_count(); ++e)
        if ((bits >> e) & 1) s.insert(e);
      naive_count += is_factor(inst, s);
    }
    EXPECT_EQ(count, naive_count) << "seed " << seed;
  }
}

TEST(Instance, RationalWeightsAreExact) {
  Graph g(3, {{0, 1}, {1, 2}, {0, 2}});
  std::vector<DegreeConstraint> cs(3, DegreeConstraint::of(2, {0, 2}));
  Instance inst(g, cs, {Rational(1, 3), Rational(1, 3), Rational(-2, 3) + Rational(1, 1000000)});
  auto best = brute_force_opt(inst);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->weight, Rational(1, 1000000));
}

TEST(Instance, SliceSemantics) {
  // star center of degree 3 with {0,1,3}: D^0 = {1,3}, D^1 = {0}
  Graph g(4, {{0, 1}, {0, 2}, {0, 3}});
  std::vector<DegreeConstraint> cs{DegreeConstraint::of(3, {0, 1, 3}), DegreeConstraint::of(1, {0, 1}),
                                   DegreeConstraint::of(1, {0, 1}), DegreeConstraint::of(1, {0, 1})};
  Instance inst(g, cs, {Rational(1), Rational(1), Rational(1)});
  EXPECT_EQ(t_set(inst), (std::vector<VertexId>{0}));
  EXPECT_EQ(restrict_parity(inst, 0, 0).constraint(0), DegreeConstraint::of(3, {1, 3}));
  EXPECT_EQ(restrict_parity(inst, 0, 1).constraint(0), DegreeConstraint::of(3, {0}));
  EXPECT_THROW(restrict_parity(inst, 1, 0), UsageError);

  EdgeSet f(g, {0});  // deg_F(0) = 1, so D^F = {1,3}
  EXPECT_EQ(slice(inst, f, {}).constraint(0), DegreeConstraint::of(3, {1, 3}));
  EXPECT_EQ(slice(inst, f, {0}).constraint(0), DegreeConstraint::of(3, {0}));
  EXPECT_THROW(slice(inst, f, {1}), UsageError);

  EdgeSet h(g);
  EXPECT_EQ(t_odd(inst, f, h), (std::vector<VertexId>{0}));
  EXPECT_TRUE(t_odd(inst, f, EdgeSet::full(g)).empty());
}

TEST(Instance, BruteForceCap) {
  GenParams p;
  p.n = 10;
  p.m = 25;
  auto inst = random_instance(1, p);
  EXPECT_THROW(brute_force_opt(inst), CapacityError);
}
