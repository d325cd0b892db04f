#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cloneforge/operation.hpp"
#include "cloneforge/relation.hpp"
#include "cloneforge/term.hpp"

namespace cloneforge {

inline constexpr std::size_t kDefaultCap = 100000;
/// The clone engine works on ternary operations over at most four elements.
inline constexpr int kMaxCloneSize = 4;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ternary operation on at most four elements, laid out with stride 4 per
/// argument (index 16a + 4b + c, 0-based) so every base size shares one shape.
struct TernaryTable {
  std::array<Code, 64> v{};
  friend bool operator==(const TernaryTable&, const TernaryTable&) = default;
};

/// Two 64-bit words, 2 bits per entry.
struct PackedTable {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const PackedTable&, const PackedTable&) = default;
  friend auto operator<=>(const PackedTable&, const PackedTable&) = default;
};

struct PackedTableHash {
  std::size_t operator()(const PackedTable& p) const noexcept {
    std::uint64_t h = p.lo * 0x9E3779B97F4A7C15ULL ^ (p.hi + 0x632BE59BD9B4E019ULL + (p.lo << 6) + (p.lo >> 2));
    h ^= h >> 31;
    h *= 0xBF58476D1CE4E5B9ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

TernaryTable to_ternary_table(const Operation& f);
Operation from_ternary_table(const TernaryTable& t, int size);
PackedTable pack(const TernaryTable& t);
TernaryTable unpack(const PackedTable& p);

/// The ternary part of [f]: projections, f, and everything reachable by
/// g -> f(g1, g2, g3). Members are kept in discovery order; each stores the
/// production that first produced it.
class CloneFragment {
 public:
  const Operation& generator() const noexcept { return generator_; }
  int base_size() const noexcept { return generator_.size(); }
  std::size_t size() const noexcept { return members_.size(); }
  bool closed() const noexcept { return closed_; }
  std::size_t cap() const noexcept { return cap_; }

  Operation member(std::size_t index) const;
  const TernaryTable& table(std::size_t index) const { return tables_[index]; }
  /// Members sorted by table.
  std::vector<Operation> members() const;
  /// Non-projection members, sorted by table.
  std::vector<Operation> nontrivial_members() const;

  /// Index of g if it has been discovered (works on partial fragments too).
  std::optional<std::size_t> find(const Operation& g) const;
  std::optional<std::size_t> find(const TernaryTable& g) const;

  /// A term over the generator evaluating to member(index).
  Term witness_term(std::size_t index) const;

  /// Indices (i, j, l) with member(index) = generator(member(i), member(j), member(l)),
  /// or nothing for the projections.
  std::optional<std::array<std::uint32_t, 3>> production(std::size_t index) const;

 private:
  friend class ClosureBuilder;
  explicit CloneFragment(Operation generator) : generator_(std::move(generator)) {}

  Operation generator_;
  std::vector<TernaryTable> tables_;
  std::vector<std::array<std::uint32_t, 3>> productions_;
  std::unordered_map<PackedTable, std::uint32_t, PackedTableHash> index_;
  std::vector<PackedTable> members_;
  bool closed_ = false;
  std::size_t cap_ = 0;
};

/// Called for each newly discovered member index; returning false stops the
/// closure early (the fragment is then left not closed).
using MemberVisitor = std::function<bool(const CloneFragment&, std::size_t)>;

/// Least fixpoint of {e1, e2, e3, f} under g -> f(g1, g2, g3). Triples are
/// explored in the order of their largest index, then lexicographically.
/// Stops with closed() == false once more than `cap` members exist.
CloneFragment ternary_closure(const Operation& f, std::size_t cap = kDefaultCap);
CloneFragment ternary_closure(const Operation& f, std::size_t cap, const MemberVisitor& visit);

/// Membership in a closed fragment; throws CapExceeded on a partial one.
bool contains(const CloneFragment& fragment, const Operation& g);

/// g in [f]. A hit in a partial closure is conclusive; a miss in one throws
/// CapExceeded.
bool generates(const Operation& f, const Operation& g, std::size_t cap = kDefaultCap);

/// Non-projection members of the closure of a majority operation, sorted.
/// Throws CapExceeded if the closure does not finish within the cap.
std::vector<Operation> majority_members(const Operation& f, std::size_t cap = kDefaultCap);

enum class WitnessReason { SubsetEscape, RangeEscape, NoReturnGeneration };
std::string_view reason_name(WitnessReason reason);

struct NonMinimalityWitness {
  Operation witness;
  WitnessReason reason;
  /// Human-readable certificate: the escaping subset, the missing range
  /// element, or the binary relation preserved by the witness but not by f.
  std::string detail;
};

/// Scans the closure of a majority f for a nontrivial member that preserves a
/// subset f does not preserve, or whose range misses an element of range(f).
std::optional<NonMinimalityWitness> quick_nonminimality_witness(const Operation& f,
                                                                std::size_t cap = kDefaultCap);

/// f in [g] for a majority g, decided on pairs: f is in [g] iff for all pairs
/// p1, p2, p3 in A^2, f(p1, p2, p3) lies in the subuniverse of (A; g)^2
/// generated by p1, p2, p3. On failure returns that subuniverse, a binary
/// relation preserved by g and not by f.
std::optional<Relation> binary_escape(const Operation& g, const Operation& f);

/// Memo of closed fragments keyed by canonical form. Safe for concurrent use.
class FragmentCache {
 public:
  /// Whether g generates f, using (and filling) the memo. Throws CapExceeded
  /// when the closure of g is too large.
  bool generates(const Operation& g, const Operation& f, std::size_t cap);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<PackedTable, std::shared_ptr<const CloneFragment>, PackedTableHash> fragments_;
  std::unordered_map<PackedTable, bool, PackedTableHash> overflow_;
};

struct MinimalityVerdict {
  enum class Kind { Minimal, NotMinimal, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::optional<Operation> witness;
  WitnessReason reason = WitnessReason::NoReturnGeneration;
  std::string detail;
  std::size_t members_seen = 0;

  bool minimal() const noexcept { return kind == Kind::Minimal; }
};

std::string_view verdict_name(MinimalityVerdict::Kind kind);

/// Decides whether the majority operation f generates a minimal clone: every
/// majority member g of the ternary closure must generate f back. Reports the
/// first failing member as witness, or Inconclusive if a needed closure
/// exceeds the cap.
MinimalityVerdict is_minimal_majority(const Operation& f, std::size_t cap = kDefaultCap,
                                      FragmentCache* cache = nullptr);

}  // namespace cloneforge
