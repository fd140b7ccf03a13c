#include <gtest/gtest.h>

#include <algorithm>

#include "factorum/generators.hpp"
#include "factorum/instance_io.hpp"

using namespace factorum;

namespace {

std::size_t error_line(std::string_view text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(InstanceIo, ParsesAllConstraintKinds) {
  auto inst = parse_instance(
      "# comment\n"
      "vertices 3\n"
      "v 0 interval 0 1\n"
      "v 1 parity 0 2   # trailing comment\n"
      "v 2 set 1\n"
      "e 0 1 3/2\n"
      "e 1 2 -0.25\n");
  EXPECT_EQ(inst.constraint(0), DegreeConstraint::of(1, {0, 1}));
  EXPECT_EQ(inst.constraint(1), DegreeConstraint::of(2, {0, 2}));
  EXPECT_EQ(inst.constraint(2), DegreeConstraint::of(1, {1}));
  EXPECT_EQ(inst.weight(0), Rational(3, 2));
  EXPECT_EQ(inst.weight(1), Rational(-1, 4));
}

TEST(InstanceIo, RoundTripIsStable) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenParams p;
    p.n = 2 + seed % 9;
    p.m = std::min<std::size_t>(p.n * (p.n - 1) / 2, seed % 15);
    auto inst = random_instance(seed, p);
    const std::string text = serialize_instance(inst);
    auto back = parse_instance(text);
    EXPECT_EQ(serialize_instance(back), text) << "seed " << seed;
    EXPECT_EQ(back.constraints(), inst.constraints());
    EXPECT_EQ(back.weights(), inst.weights());
    EXPECT_TRUE(validate(back).admissible());
  }
}

TEST(InstanceIo, GeneratorIsDeterministic) {
  GenParams p;
  p.n = 9;
  p.m = 14;
  EXPECT_EQ(serialize_instance(random_instance(42, p)), serialize_instance(random_instance(42, p)));
  EXPECT_NE(serialize_instance(random_instance(42, p)), serialize_instance(random_instance(43, p)));
}

TEST(InstanceIo, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 1\nv 1 range 0 1\ne 0 1 1\n"), 3u);
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 1\nv 1 interval 0 1\ne 0 0 1\n"), 4u);
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 1\nv 1 interval 0 1\ne 0 1 1\ne 1 0 2\n"), 5u);
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 1\ne 0 1 1\nv 1 interval 0 1\n"), 3u);
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 1\nv 0 interval 0 1\n"), 3u);
  EXPECT_EQ(error_line("\n\nv 0 interval 0 1\n"), 3u);
  // interval 0 2 on a degree-1 vertex
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 2\nv 1 interval 0 1\ne 0 1 1\n"), 2u);
  EXPECT_EQ(error_line("vertices 2\nv 0 parity 0 1\n"), 2u);
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 1\nv 1 interval 0 1\ne 0 1 x\n"), 4u);
  EXPECT_EQ(error_line("vertices 2\nv 0 interval 0 0\n"), 2u);  // vertex 1 missing: last line
}

TEST(InstanceIo, FactorRecords) {
  auto inst = parse_instance("vertices 3\nv 0 interval 0 1\nv 1 interval 0 2\nv 2 interval 0 1\n"
                             "e 0 1 1\ne 1 2 2\n");
  auto rec = parse_factor("status optimum\nweight 3\nedge_count 2\ne 1 0\ne 1 2\nstat dec_calls 0\n");
  EXPECT_TRUE(rec.feasible);
  EXPECT_EQ(rec.weight, Rational(3));
  EXPECT_EQ(to_edge_set(inst, rec), EdgeSet::full(inst.graph()));
  EXPECT_THROW(to_edge_set(inst, parse_factor("e 0 2\n")), ParseError);
  EXPECT_THROW(to_edge_set(inst, parse_factor("e 0 1\ne 1 0\n")), ParseError);
  EXPECT_FALSE(parse_factor("status no\nNo\n").feasible);
  EXPECT_THROW(parse_factor("status maybe\n"), ParseError);

  auto text = format_factor(inst, make_factor(inst, EdgeSet::full(inst.graph())));
  auto again = parse_factor(text);
  EXPECT_EQ(to_edge_set(inst, again), EdgeSet::full(inst.graph()));
  EXPECT_EQ(format_factor(inst, std::nullopt), "status no\nNo\n");
}

TEST(InstanceIo, TerminalBackupConversion) {
  auto tb = parse_terminal_backup("vertices 4\nt 0\nt 3\ne 0 1 1\ne 1 2 2\ne 2 3 3\ne 1 3 1\n");
  auto conv = terminal_backup_to_instance(tb);
  ASSERT_TRUE(conv.instance);
  const Instance& inst = *conv.instance;
  EXPECT_EQ(inst.constraint(0), DegreeConstraint::of(1, {1}));
  EXPECT_EQ(inst.constraint(1), DegreeConstraint::of(3, {0, 2, 3}));
  EXPECT_EQ(inst.constraint(2), DegreeConstraint::of(2, {0, 2}));
  EXPECT_EQ(inst.constraint(3), DegreeConstraint::of(2, {1}));
  EXPECT_EQ(inst.weight(1), Rational(-2));
  EXPECT_TRUE(validate(inst).admissible());

  auto lonely = terminal_backup_to_instance(parse_terminal_backup("vertices 2\nt 1\n"));
  EXPECT_FALSE(lonely.instance);
  EXPECT_EQ(lonely.isolated_terminals, (std::vector<VertexId>{1}));
  EXPECT_THROW(parse_terminal_backup("vertices 2\ne 0 1 -1\n"), ParseError);
}

TEST(InstanceIo, EdgeListsAndDot) {
  auto p = parse_edge_list("vertices 4\ne 0 1 1\ne 1 2 5\ne 2 3 1\ne 3 0 5\n");
  EXPECT_EQ(p.graph.edge_count(), 4u);
  EXPECT_EQ(serialize_edge_list(p.graph, p.weights), "vertices 4\ne 0 1 1\ne 1 2 5\ne 2 3 1\ne 3 0 5\n");
  EXPECT_THROW(parse_edge_list("vertices 2\ne 0 1 1\ne 1 0 1\n"), ParseError);
  auto inst = parse_instance("vertices 2\nv 0 set 1\nv 1 set 1\ne 0 1 7\n");
  auto dot = to_dot(inst);
  EXPECT_NE(dot.find("0 -- 1"), std::string::npos);
  EXPECT_NE(dot.find("label=\"7\""), std::string::npos);
}
