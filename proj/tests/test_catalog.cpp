#include "doctest.h"

#include <algorithm>

#include "cloneforge/catalog.hpp"
#include "cloneforge/error.hpp"

using namespace cloneforge;

TEST_CASE("oracle: printed block sizes") {
  CHECK(printed_members("m1").size() == 1);
  CHECK(printed_members("m2").size() == 3);
  CHECK(printed_members("m3").size() == 8);
  CHECK(printed_members("M1").size() == 1);
  CHECK(printed_members("M2").size() == 3);
  CHECK(printed_members("M3").size() == 8);
  CHECK(printed_table("members3").columns() == 12);
  CHECK(printed_table("members4").rows.size() == 14);
}

TEST_CASE("oracle: each block starts with its generator") {
  for (auto name : kTableNames) CHECK(printed_members(name).front() == *named_table(name));
}

TEST_CASE("oracle: second column of the m2 block") {
  // Column 2: (1,2,3)->2, (2,3,1)->3, (3,1,2)->1, (2,1,3)->1, (1,3,2)->3, (3,2,1)->2,
  // which is the second argument.
  const Operation second = majority_from(3, [](int, int b, int) { return b; });
  CHECK(printed_members("m2")[1] == second);
}

TEST_CASE("computed members equal the printed blocks") {
  for (auto name : kTableNames) {
    auto printed = printed_members(name);
    std::sort(printed.begin(), printed.end());
    CHECK(majority_members(*named_table(name)) == printed);
  }
}

TEST_CASE("table lookup") {
  CHECK_FALSE(named_table("m4").has_value());
  CHECK_FALSE(named_table("X1").has_value());
  CHECK_THROWS_AS(printed_table("nope"), AlgebraError);
  CHECK_THROWS_AS(printed_members("m9"), AlgebraError);
  CHECK_THROWS_AS(printed_table("M").block("M4"), AlgebraError);
}

TEST_CASE("three-element classification") {
  for (int i = 1; i <= 3; ++i) {
    const auto c = classify_three_element(m_table(i));
    CHECK(c.minimal());
    CHECK(c.type == i);
    REQUIRE(c.member.has_value());
    CHECK(conjugate(*c.member, c.bijection) == m_table(i));
  }
  // The second projection pattern is a copy of m2.
  const auto c = classify_three_element(majority_from(3, [](int, int b, int) { return b; }));
  CHECK(c.type == 2);
  CHECK_THROWS_AS(classify_three_element(M_table(1)), AlgebraError);
}

TEST_CASE("conservative gluing") {
  const Operation first = majority_from(4, [](int a, int, int) { return a; });
  const auto spec = conservative_spec(first);
  CHECK(spec.size() == 4);
  for (const auto& [subset, component] : spec) CHECK(component == m_table(2));
  CHECK(glue_conservative(spec) == first);

  // Mixed components: m1 on {1,2,3} means value 1 there, re-indexed.
  auto mixed = spec;
  mixed.at(Subset(4, {2, 3, 4})) = m_table(1);
  const Operation g = glue_conservative(mixed);
  CHECK(g({4, 3, 2}) == 2);
  CHECK(g({1, 2, 3}) == 1);
  CHECK(conservative_spec(g) == mixed);

  mixed.erase(Subset(4, {1, 2, 3}));
  CHECK_THROWS_AS(glue_conservative(mixed), AlgebraError);
}
