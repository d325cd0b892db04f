#include "doctest.h"

#include "cloneforge/catalog.hpp"
#include "cloneforge/error.hpp"
#include "cloneforge/operation.hpp"
#include "cloneforge/operation_io.hpp"

using namespace cloneforge;

// Hand-derived values first.

TEST_CASE("oracle: table entries read off the generator table") {
  const Operation m2 = M_table(2);
  CHECK(m2({1, 2, 3}) == 4);
  CHECK(m2({2, 3, 1}) == 2);
  CHECK(m2({3, 1, 2}) == 3);
  CHECK(m2({2, 1, 3}) == 2);
  CHECK(m2({1, 2, 4}) == 4);  // subset row {1,2,4}
  CHECK(m2({4, 1, 2}) == 4);
  CHECK(m2({3, 3, 1}) == 3);  // majority rule
  CHECK(M_table(1)({4, 2, 3}) == 4);
  CHECK(M_table(3)({2, 3, 4}) == 3);
}

TEST_CASE("oracle: m1, m2, m3 on distinct triples") {
  CHECK(m_table(1)({3, 2, 1}) == 1);
  CHECK(m_table(2)({3, 2, 1}) == 3);
  CHECK(m_table(3)({1, 2, 3}) == 2);  // x_i = 1 at i = 1, so x_2
  CHECK(m_table(3)({2, 1, 3}) == 3);
  CHECK(m_table(3)({2, 3, 1}) == 2);  // wraps around to x_1
}

TEST_CASE("oracle: predicates") {
  CHECK(is_projection(projection(3, 2, 4)) == 2);
  CHECK_FALSE(is_projection(M_table(1)).has_value());
  for (int i = 1; i <= 3; ++i) {
    CHECK(is_majority(M_table(i)));
    CHECK(is_near_unanimity(M_table(i)));
    CHECK(is_idempotent(M_table(i)));
    CHECK_FALSE(is_conservative(M_table(i)));
    CHECK(is_conservative(m_table(i)));
  }
  CHECK_FALSE(is_cyclically_commutative(M_table(2)));  // M2(1,2,3) = 4, M2(2,3,1) = 2
  CHECK(is_cyclically_commutative(M_table(1)));
  CHECK(is_cyclically_commutative(M_table(3)));
  CHECK_FALSE(is_majority(projection(3, 1, 3)));
  CHECK(is_semiprojection(projection(3, 1, 3)));
  CHECK_FALSE(is_semiprojection(M_table(1)));

  // x + y + z over Z2 is the Boolean minority; majority is not.
  const Operation minority = make_operation(3, 2, {1, 2, 2, 1, 2, 1, 1, 2});
  CHECK(is_boolean_minority(minority));
  CHECK_FALSE(is_boolean_minority(majority_from(2, [](int a, int, int) { return a; })));
  CHECK_THROWS_AS(is_boolean_minority(m_table(1)), AlgebraError);
}

TEST_CASE("oracle: ranges miss the element 1") {
  CHECK(range_of(M_table(1)).to_string() == "{4}");
  CHECK(range_of(M_table(2)).to_string() == "{2,3,4}");
  CHECK(range_of(M_table(3)).to_string() == "{3,4}");
}

TEST_CASE("cyclic classes") {
  CHECK(cyclic_classes(3).size() == 2);
  CHECK(cyclic_classes(4).size() == 8);
  const CyclicClass c(3, 1, 2);
  CHECK(c.representative() == std::array<int, 3>{1, 2, 3});
  CHECK(c.contains(2, 3, 1));
  CHECK_FALSE(c.contains(2, 1, 3));
  int total = 0;
  for (const auto& cls : cyclic_classes(4)) total += static_cast<int>(cls.members().size());
  CHECK(total == 24);
}

TEST_CASE("subsets order by cardinality then lexicographically") {
  CHECK(Subset(4, {4}) < Subset(4, {1, 2}));
  CHECK(Subset(4, {1, 3}) < Subset(4, {2, 3}));
  CHECK(Subset::from_mask(4, 0b1011).to_string() == "{1,2,4}");
  CHECK_THROWS_AS(Subset(3, {4}), AlgebraError);
}

TEST_CASE("restriction and isomorphism") {
  CHECK(restrict(m_table(2), Subset(3, {1, 2, 3})) == m_table(2));
  CHECK_FALSE(find_isomorphism(M_table(1), M_table(2)).has_value());
  CHECK_THROWS_AS(restrict(M_table(1), Subset(4, {1, 2, 3})), AlgebraError);

  const Bijection phi{3, 1, 4, 2};
  const Operation g = conjugate(M_table(3), phi);
  const auto found = find_isomorphism(M_table(3), g);
  REQUIRE(found.has_value());
  CHECK(conjugate(M_table(3), *found) == g);
  CHECK(canonical_form(g) == canonical_form(M_table(3)));
  const auto c = canonicalize(g);
  CHECK(conjugate(g, c.map) == c.form);
  CHECK(all_bijections(4).size() == 24);
  CHECK(inverse(phi) == Bijection{2, 4, 1, 3});
}

TEST_CASE("composition with projections") {
  const Operation f = M_table(2);
  const int k = f.size();
  const Operation swapped = compose(f, {projection(3, 2, k), projection(3, 1, k), projection(3, 3, k)});
  CHECK(swapped({1, 2, 3}) == f({2, 1, 3}));
  CHECK(compose(f, {projection(3, 1, k), projection(3, 2, k), projection(3, 3, k)}) == f);
}

TEST_CASE("text formats") {
  const std::string text = serialize(m_table(1), TextFormat::Majority);
  CHECK(text.rfind("MAJORITY size=3\n1 2 3 -> 1\n1 3 2 -> 1\n", 0) == 0);
  for (auto name : kTableNames)
    for (auto format : {TextFormat::Full, TextFormat::Majority}) {
      const Operation f = *named_table(name);
      CHECK(parse_operation(serialize(f, format)) == f);
      CHECK(serialize(parse_operation(serialize(f, format)), format) == serialize(f, format));
    }
  CHECK(parse_operation("# comment\nMAJORITY size=3\n2 1 3 -> 1\n1 2 3 -> 1\n1 3 2 -> 1\n2 3 1 -> 1\n3 1 2 -> 1\n3 2 1 -> 1\n") ==
        m_table(1));
  CHECK_THROWS_AS(serialize(projection(3, 1, 3), TextFormat::Majority), AlgebraError);
}

TEST_CASE("malformed files report the line") {
  auto line_of = [](const std::string& text) {
    try {
      parse_operation(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("MAJORITY size=3\n1 2 3 -> 9\n") == 2);
  CHECK(line_of("MAJORITY size=3\n1 2 3 -> 1\n1 2 3 -> 1\n") == 3);
  CHECK(line_of("OPERATION arity=2 size=2\n1 1 -> 1\n") == 0);  // missing tuples
  CHECK(line_of("hello\n") == 1);
}
