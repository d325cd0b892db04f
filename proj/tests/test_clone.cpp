#include "doctest.h"

#include "cloneforge/catalog.hpp"
#include "cloneforge/clone.hpp"
#include "cloneforge/error.hpp"
#include "cloneforge/relation.hpp"
#include "cloneforge/verifier.hpp"

using namespace cloneforge;

TEST_CASE("oracle: fragment sizes are three projections plus the majority members") {
  const std::array<std::size_t, 3> members{1, 3, 8};
  for (int i = 1; i <= 3; ++i) {
    const auto n = members[static_cast<std::size_t>(i - 1)];
    const auto big = ternary_closure(M_table(i));
    const auto small = ternary_closure(m_table(i));
    CHECK(big.closed());
    CHECK(big.size() == n + 3);
    CHECK(small.size() == n + 3);
    CHECK(majority_members(M_table(i)).size() == n);
  }
}

TEST_CASE("oracle: a constant-on-distinct-triples operation is alone in its clone") {
  // Any composite of M1 is 4 on distinct triples or a projection.
  const auto fragment = ternary_closure(M_table(1));
  CHECK(fragment.nontrivial_members() == std::vector<Operation>{M_table(1)});
}

TEST_CASE("closure contents") {
  const auto fragment = ternary_closure(M_table(3));
  for (int i = 1; i <= 3; ++i) CHECK(contains(fragment, projection(3, i, 4)));
  CHECK(contains(fragment, M_table(3)));
  CHECK_FALSE(contains(fragment, M_table(1)));
  for (std::size_t i = 0; i < fragment.size(); ++i) CHECK(fragment.find(fragment.member(i)) == i);
  CHECK(generates(M_table(3), M_table(3)));
  CHECK_FALSE(generates(M_table(1), M_table(3)));
}

TEST_CASE("cap handling") {
  const auto partial = ternary_closure(M_table(3), 5);
  CHECK_FALSE(partial.closed());
  CHECK_THROWS_AS(majority_members(M_table(3), 5), CapExceeded);
  CHECK(is_minimal_majority(M_table(3), 5).kind == MinimalityVerdict::Kind::Inconclusive);
  CHECK(decide_minimality(M_table(3), 5).minimal());
}

TEST_CASE("minimality of the generators") {
  for (int i = 1; i <= 3; ++i) {
    CHECK(is_minimal_majority(M_table(i)).minimal());
    CHECK(is_minimal_majority(m_table(i)).minimal());
  }
  CHECK_THROWS_AS(is_minimal_majority(projection(3, 1, 3)), PreconditionError);
}

TEST_CASE("every NotMinimal verdict on three elements carries a valid certificate") {
  int refuted = 0;
  for (int code = 0; code < 729; ++code) {
    int digits = code;
    const Operation f = majority_from(3, [&digits](int, int, int) {
      const int v = digits % 3 + 1;
      digits /= 3;
      return v;
    });
    const auto v = is_minimal_majority(f);
    REQUIRE(v.kind != MinimalityVerdict::Kind::Inconclusive);
    if (v.minimal()) continue;
    ++refuted;
    REQUIRE(v.witness.has_value());
    CHECK(generates(f, *v.witness));
    CHECK_FALSE(is_projection(*v.witness).has_value());
    CHECK_FALSE(generates(*v.witness, f));
  }
  CHECK(refuted == 699);
}

TEST_CASE("the pair test returns a separating relation") {
  // No column of the printed [M3] block is constant, so M1 is not in [M3].
  const auto rho = binary_escape(M_table(3), M_table(1));
  REQUIRE(rho.has_value());
  CHECK(rho->arity() == 2);
  CHECK(preserves(M_table(3), *rho));
  CHECK_FALSE(preserves(M_table(1), *rho));
  CHECK_FALSE(binary_escape(M_table(3), M_table(3)).has_value());
  for (const auto& g : majority_members(M_table(3))) CHECK_FALSE(binary_escape(M_table(3), g).has_value());
}

TEST_CASE("quick witnesses are sound") {
  // Majority f with value 1 on <123> and 2 on <132>: range {1,2}.
  const Operation f = majority_from(3, [](int a, int b, int c) { return CyclicClass(1, 2, 3).contains(a, b, c) ? 1 : 2; });
  if (const auto w = quick_nonminimality_witness(f)) {
    CHECK(generates(f, w->witness));
    CHECK_FALSE(generates(w->witness, f));
  }
}

TEST_CASE("fragment cache agrees with direct closure") {
  FragmentCache cache;
  for (const auto& g : majority_members(M_table(3))) {
    CHECK(cache.generates(g, M_table(3), kDefaultCap) == generates(g, M_table(3)));
    CHECK(cache.generates(conjugate(g, {2, 1, 4, 3}), conjugate(M_table(3), {2, 1, 4, 3}), kDefaultCap));
  }
}

TEST_CASE("ternary tables pack and unpack") {
  const Operation f = M_table(2);
  CHECK(from_ternary_table(to_ternary_table(f), 4) == f);
  CHECK(unpack(pack(to_ternary_table(f))) == to_ternary_table(f));
  CHECK_THROWS(ternary_closure(projection(3, 1, 5)));
}
