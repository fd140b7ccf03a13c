#include <gtest/gtest.h>

#include "factorum/realizability.hpp"

using namespace factorum;

TEST(Realizability, SmallGadgets) {
  EXPECT_EQ(realized_set(build_interval_gadget(1, 2, 2)), DegreeConstraint::of(2, {1, 2}));
  EXPECT_EQ(realized_set(build_parity_gadget(0, 2, 2)), DegreeConstraint::of(2, {0, 2}));
  EXPECT_EQ(realized_set(matchgate(1, 1, 3)), DegreeConstraint::of(3, {1, 2}));
  auto m = gadget_matching(build_interval_gadget(1, 2, 2), 0b01);
  ASSERT_TRUE(m);
  EXPECT_FALSE(gadget_matching(build_interval_gadget(1, 2, 2), 0b00));
}

TEST(Realizability, FeasibleFamilyIsSymmetric) {
  for (unsigned d = 0; d <= 5; ++d)
    for (unsigned g = 0; g <= d; ++g)
      for (unsigned f = g; f <= d; f += 2) {
        auto gb = build_parity_gadget(g, f, d);
        auto fam = feasible_family(gb);
        for (std::uint32_t w = 0; w < (1u << d); ++w)
          EXPECT_EQ(fam.contains(w), gb.modeled.contains(static_cast<unsigned>(std::popcount(w))));
      }
}

TEST(Realizability, DeltaMatroidExamples) {
  EXPECT_TRUE(is_delta_matroid(SetFamily::symmetric(DegreeConstraint::of(3, {0, 1, 3}))));
  EXPECT_FALSE(is_delta_matroid(SetFamily::symmetric(DegreeConstraint::of(3, {0, 3}))));
  EXPECT_TRUE(is_delta_matroid(SetFamily::all_subsets(3)));
  EXPECT_TRUE(is_delta_matroid(SetFamily(2, {0b00, 0b11})));
  EXPECT_FALSE(is_delta_matroid(SetFamily(3, {0b000, 0b111})));
  EXPECT_THROW(SetFamily(2, {0b100}), UsageError);
  EXPECT_THROW(SetFamily(21, {}), CapacityError);
}

TEST(Realizability, PartitionWitnessSplitsTheDifference) {
  auto gb = build_interval_gadget(0, 2, 3);
  auto w = partition_witness(gb, 0b000, 0b011);
  EXPECT_TRUE(w.unions_feasible);
  EXPECT_EQ(w.singles.size() + 2 * w.pairs.size(), 2u);

  auto pg = build_parity_gadget(0, 2, 3);
  auto p = partition_witness(pg, 0b000, 0b110);
  EXPECT_TRUE(p.unions_feasible);
  EXPECT_TRUE(p.singles.empty());
  ASSERT_EQ(p.pairs.size(), 1u);
  EXPECT_THROW(partition_witness(pg, 0b000, 0b001), UsageError);
}

TEST(Realizability, PartitionWitnessOnEveryGadgetPair) {
  for (unsigned d = 1; d <= 4; ++d)
    for (unsigned g = 0; g <= d; ++g)
      for (unsigned f = g; f <= d; ++f) {
        auto gb = build_interval_gadget(g, f, d);
        auto fam = feasible_family(gb);
        for (auto a : fam.members())
          for (auto b : fam.members()) {
            auto w = partition_witness(gb, a, b);
            ASSERT_TRUE(w.unions_feasible);
            std::uint32_t cover = 0;
            for (auto s : w.singles) cover |= 1u << s;
            for (auto [x, y] : w.pairs) cover |= (1u << x) | (1u << y);
            ASSERT_EQ(cover, a ^ b);
          }
      }
}

TEST(Realizability, ObstructionExamples) {
  EXPECT_EQ(obstruction_check(DegreeConstraint::of(3, {0, 1, 3})), Realizability::NotRealizable);
  EXPECT_EQ(obstruction_check(DegreeConstraint::of(3, {0, 2, 3})), Realizability::NotRealizable);
  EXPECT_EQ(obstruction_check(DegreeConstraint::of(5, {1, 2, 4})), Realizability::NotRealizable);
  EXPECT_EQ(obstruction_check(DegreeConstraint::of(4, {0, 1, 2, 3})), Realizability::Consistent);
  EXPECT_EQ(obstruction_check(DegreeConstraint::of(4, {0, 2, 4})), Realizability::Consistent);
  EXPECT_EQ(obstruction_check(DegreeConstraint::of(4, {1, 3})), Realizability::Consistent);
  EXPECT_THROW(obstruction_check(DegreeConstraint::of(3, {0, 3})), UsageError);
  EXPECT_STREQ(to_string(Realizability::NotRealizable), "not-realizable");
}
