#include "doctest.h"

#include <atomic>
#include <cmath>

#include "cloneforge/catalog.hpp"
#include "cloneforge/error.hpp"
#include "cloneforge/term.hpp"
#include "cloneforge/verifier.hpp"

using namespace cloneforge;

namespace {

std::uint64_t power(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

TEST_CASE("oracle: star completions without constraints") {
  // j classes take the first-argument pattern; each other class is one of 4
  // constants or one of the 3 rotations of a pattern class.
  std::uint64_t expected = 0;
  for (int j = 0; j <= 8; ++j) expected += binomial(8, j) * power(4 + 3 * static_cast<std::uint64_t>(j), 8 - j);
  const StarSampler sampler(BracketSpec::parse("[*,*,*;*,*,*]"));
  CHECK(sampler.star_completions() == expected);
  CHECK(sampler.completions() == power(4, 24));
}

TEST_CASE("oracle: a fully fixed bracket on the pattern class") {
  // (1,2,3) on <123> is not constant, and the only pattern class with the
  // rotation (1,2,3) is <123> itself. So <123> is a pattern class.
  const StarSampler sampler(BracketSpec::parse("[1,2,3;*,*,*]"));
  std::uint64_t expected = 0;
  for (int j = 0; j <= 7; ++j) expected += binomial(7, j) * power(4 + 3 * static_cast<std::uint64_t>(j + 1), 7 - j);
  CHECK(sampler.star_completions() == expected);
}

TEST_CASE("oracle: a bracket with two values on one class has no completion") {
  const StarSampler sampler(BracketSpec::parse("[1,1,2;*,*,*]"));
  CHECK(sampler.star_completions() == 0);
  const Report r = spot_check_claim({"none", BracketSpec::parse("[1,1,2;*,*,*]"), false}, {});
  CHECK(r.status == Status::NoSamples);
  CHECK(exit_code(r.status) == 2);
}

TEST_CASE("samples satisfy the identity and the bracket") {
  for (const auto& claim : claim_checks()) {
    const StarSampler sampler(claim.bracket);
    for (std::uint64_t i = 0; i < 20; ++i) {
      SampleRng rng(3, i);
      const Operation f = sampler.sample(rng);
      CHECK(is_majority(f));
      CHECK(satisfies_star(f));
      CHECK(claim.bracket.matches(f));
    }
  }
}

TEST_CASE("oracle: the companion class and one of its marginals") {
  // (4,2,3) on <123> is a rotation of <234> and (4,3,2) on <132> one of <243>,
  // so both are pattern classes. With j of the four remaining classes also
  // patterns, each other class has 4 + 3(2 + j) options.
  std::uint64_t expected = 0;
  for (int j = 0; j <= 4; ++j) expected += binomial(4, j) * power(10 + 3 * static_cast<std::uint64_t>(j), 4 - j);
  CHECK(expected == 20401);
  const StarSampler sampler(BracketSpec::parse("[4,2,3;2,4,3]"));
  CHECK(sampler.star_completions() == expected);

  // <124> constant 4 leaves three free classes: 1556 completions.
  std::uint64_t marginal = 0;
  for (int j = 0; j <= 3; ++j) marginal += binomial(3, j) * power(10 + 3 * static_cast<std::uint64_t>(j), 3 - j);
  CHECK(marginal == 1556);
  const double p = static_cast<double>(marginal) / static_cast<double>(expected);
  const int n = 4000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    SampleRng rng(11, static_cast<std::uint64_t>(i));
    const Operation f = sampler.sample(rng);
    hits += f({1, 2, 4}) == 4 && f({2, 4, 1}) == 4 && f({4, 1, 2}) == 4;
  }
  const double share = static_cast<double>(hits) / n;
  CHECK(std::abs(share - p) < 5 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("rng streams") {
  SampleRng a(5, 9), b(5, 9), c(5, 10);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  for (int i = 0; i < 1000; ++i) CHECK(a.below(7) < 7);
  CHECK_THROWS(a.below(0));
}

TEST_CASE("bracket syntax") {
  const auto spec = BracketSpec::parse("[4, 2, 3; 2, *, 3]");
  CHECK(spec.to_string() == "[4,2,3;2,*,3]");
  CHECK_FALSE(spec.values[4].has_value());
  CHECK(BracketSpec::parse("[4,2,3;2,4,3]").matches(M_table(2)));
  CHECK_FALSE(BracketSpec::parse("[4,2,3;2,1,4]").matches(M_table(2)));
  CHECK_THROWS(BracketSpec::parse("[4,2,3,2,4,3]"));
  CHECK_THROWS(BracketSpec::parse("[4,2,3;2,4]"));
  CHECK_THROWS(BracketSpec::parse("[5,2,3;2,4,3]"));
}

TEST_CASE("the set S") {
  const auto first = S_candidate(0);
  for (const auto& p : class_profile(first)) CHECK(p == ClassPattern{ClassPattern::Kind::Const, 1});
  const auto last = S_candidate(kSCandidates - 1);
  for (const auto& p : class_profile(last)) CHECK(p.kind == ClassPattern::Kind::P);
  CHECK(in_S(M_table(1)));
  CHECK(in_S(M_table(3)));
  CHECK_FALSE(in_S(M_table(2)));  // (1,2,3) -> 4, (2,3,1) -> 2
  CHECK_THROWS(S_candidate(kSCandidates));
  std::uint64_t seen = 0;
  enumerate_S([&](std::uint64_t i, const Operation& f) {
    if (i % 9973 == 0) CHECK(in_S(f));
    ++seen;
  });
  CHECK(seen == kSCandidates);
}

TEST_CASE("definition-level oracle") {
  for (int i = 1; i <= 3; ++i) CHECK(definition_minimal(M_table(i), kDefaultCap));
  // An operation outside the printed tables.
  const Operation f = S_candidate(kSCandidates - 1);
  CHECK(definition_minimal(f, kDefaultCap) == is_minimal_majority(f).minimal());
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 7) throw AlgebraError("boom");
  }));
}

TEST_CASE("reports do not depend on the thread count") {
  VerifyOptions one, many;
  one.samples = many.samples = 30;
  many.threads = 4;
  const auto& claim = claim_checks().back();
  CHECK(spot_check_claim(claim, one).to_json().dump() == spot_check_claim(claim, many).to_json().dump());
  CHECK(verify_star_properties(one).to_json().dump() == verify_star_properties(many).to_json().dump());
}

TEST_CASE("small checks pass") {
  const VerifyOptions options;
  for (auto name : {"tables", "minimality", "restriction", "roundtrip", "lemma31"}) {
    const Report r = run_check(name, options);
    CHECK_MESSAGE(r.passed(), name);
  }
  CHECK_THROWS_AS(run_check("nope", options), AlgebraError);
}

TEST_CASE("star properties on a short run") {
  VerifyOptions options;
  options.samples = 60;
  options.seed = 99;
  const Report r = verify_star_properties(options);
  CHECK(r.passed());
  CHECK(r.seed == 99);
  CHECK(r.counters["samples"] == 60);
}
