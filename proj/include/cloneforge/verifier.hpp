#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloneforge/clone.hpp"
#include "cloneforge/operation.hpp"
#include "cloneforge/report.hpp"

namespace cloneforge {

struct VerifyOptions {
  std::size_t cap = kDefaultCap;
  /// Unset means each check uses its own default.
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  unsigned threads = 1;
};

// ---------------------------------------------------------------------------
// Randomness. Every sample owns a stream derived from (seed, index), so the
// schedule of a parallel run cannot change what a sample sees.

class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index);
  std::uint64_t next();
  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// Majority operation with each pairwise-distinct triple drawn uniformly.
Operation random_majority(int size, SampleRng& rng);

// ---------------------------------------------------------------------------
// Bracket classes [p,q,r;s,t,u]: values on (1,2,3), (2,3,1), (3,1,2),
// (2,1,3), (1,3,2), (3,2,1); nullopt is a wildcard.

struct BracketSpec {
  std::array<std::optional<int>, 6> values;

  static BracketSpec parse(std::string_view text);  // "[4,2,3;2,*,3]"
  std::string to_string() const;
  bool matches(const Operation& f) const;
};

inline constexpr std::array<std::array<int, 3>, 6> kBracketTriples{
    {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}, {2, 1, 3}, {1, 3, 2}, {3, 2, 1}}};

/// Uniform sampling from the majority operations on {1,2,3,4} in a bracket
/// class that satisfy the star identity. Such an operation is, on each cyclic
/// class, constant, or the first-argument pattern, or takes the values of a
/// triple whose own class has the first-argument pattern; the sampler counts
/// these shapes exactly, so no draw is rejected.
class StarSampler {
 public:
  explicit StarSampler(const BracketSpec& spec);
  /// Number of completions satisfying the identity.
  std::uint64_t star_completions() const noexcept { return total_; }
  /// Number of all completions (4 choices per unconstrained distinct triple).
  std::uint64_t completions() const noexcept { return all_; }
  Operation sample(SampleRng& rng) const;

 private:
  struct Choice {
    std::array<int, 3> values;
  };
  std::vector<Choice> options(std::size_t cls, std::uint32_t p_classes) const;
  bool allowed(std::size_t cls, const std::array<int, 3>& values) const;

  BracketSpec spec_;
  std::vector<std::array<std::array<int, 3>, 3>> rotations_;  // per class
  std::array<std::uint64_t, 256> weight_{};
  std::uint64_t total_ = 0;
  std::uint64_t all_ = 1;
};

// ---------------------------------------------------------------------------
// The set S: majority operations on {1,2,3,4} that are constant or the
// first-argument pattern on every cyclic class.

struct ClassPattern {
  enum class Kind { Const, P, Mixed };
  Kind kind = Kind::Mixed;
  int value = 0;  // for Const
  std::string to_string() const;
  friend bool operator==(const ClassPattern&, const ClassPattern&) = default;
};

/// Pattern on each class of cyclic_classes(f.size()).
std::vector<ClassPattern> class_profile(const Operation& f);
bool in_S(const Operation& f);

inline constexpr std::uint64_t kSCandidates = 390625;
/// Candidate `index` (0 <= index < 5^8): base-5 digit j picks the pattern of
/// class j, 0..3 constant 1..4 and 4 the first-argument pattern.
Operation S_candidate(std::uint64_t index);
void enumerate_S(const std::function<void(std::uint64_t, const Operation&)>& visit);

// ---------------------------------------------------------------------------
// Checks. Each returns a deterministic report.

/// Minimality with the cap raised x10 twice before accepting Inconclusive.
MinimalityVerdict decide_minimality(const Operation& f, std::size_t cap, FragmentCache* cache = nullptr);

/// Minimality by definition only: every nontrivial member of [f] must
/// generate f, each generation decided by building a closure.
bool definition_minimal(const Operation& f, std::size_t cap);

Report sweep_three_element(const VerifyOptions& options);
Report reproduce_tables(const VerifyOptions& options);
Report verify_generators_minimal(const VerifyOptions& options);
Report classify_S(const VerifyOptions& options);
Report restriction_correspondence(const VerifyOptions& options);
Report verify_star_properties(const VerifyOptions& options);
Report verify_roundtrip(const VerifyOptions& options);
Report verify_conservative(const VerifyOptions& options);

struct ClaimCheck {
  std::string id;        // "3.3.1", ..., "3.6-companion"
  BracketSpec bracket;
  bool companion = false;  // minimal samples must equal M2 instead of not existing
};
const std::vector<ClaimCheck>& claim_checks();
Report spot_check_claim(const ClaimCheck& claim, const VerifyOptions& options);
/// All claim checks in one report.
Report spot_check_claims(const VerifyOptions& options);

inline constexpr std::array<std::string_view, 9> kVerifyTargets{
    "tables", "three-element", "minimality", "s-classify", "lemma31", "star-properties", "restriction", "claims",
    "roundtrip"};

/// One check by name (also "conservative"); throws AlgebraError for unknown names.
Report run_check(std::string_view name, const VerifyOptions& options);
std::vector<Report> run_all(const VerifyOptions& options);

/// Calls body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace cloneforge
