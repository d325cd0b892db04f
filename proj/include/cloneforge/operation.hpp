#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cloneforge {

inline constexpr int kMaxSize = 8;
inline constexpr int kMaxArity = 4;

/// Elements are 1-based in the whole public API. Tables are stored 0-based;
/// `codes()` exposes that raw form for tight loops.
using Code = std::uint8_t;

/// A total finitary operation on {1..size}. The table lists the values of all
/// size^arity argument tuples in lexicographic order, last argument fastest.
class Operation {
 public:
  /// Validates and takes ownership of a 0-based table.
  static Operation from_codes(int arity, int size, std::vector<Code> codes);

  int arity() const noexcept { return arity_; }
  int size() const noexcept { return size_; }
  std::size_t table_size() const noexcept { return codes_.size(); }

  int operator()(std::span<const int> args) const;
  int operator()(std::initializer_list<int> args) const {
    return (*this)(std::span<const int>(args.begin(), args.size()));
  }

  std::span<const Code> codes() const noexcept { return codes_; }
  Code code_at(std::size_t index) const noexcept { return codes_[index]; }

  /// 1-based values, in table order.
  std::vector<int> values() const;

  friend bool operator==(const Operation&, const Operation&) = default;
  friend auto operator<=>(const Operation&, const Operation&) = default;

 private:
  Operation(int arity, int size, std::vector<Code> codes)
      : arity_(arity), size_(size), codes_(std::move(codes)) {}

  int arity_;
  int size_;
  std::vector<Code> codes_;
};

/// Lexicographic index of a 1-based tuple.
std::size_t tuple_index(int size, std::span<const int> tuple);
/// Inverse of tuple_index.
std::vector<int> index_tuple(int size, int arity, std::size_t index);
std::size_t table_length(int arity, int size);

Operation make_operation(int arity, int size, std::span<const int> table);
inline Operation make_operation(int arity, int size, std::initializer_list<int> table) {
  return make_operation(arity, size, std::span<const int>(table.begin(), table.size()));
}

Operation projection(int arity, int index, int size);

/// outer(inner_1(t), ..., inner_n(t)) for every tuple t.
Operation compose(const Operation& outer, std::span<const Operation> inner);
inline Operation compose(const Operation& outer, std::initializer_list<Operation> inner) {
  return compose(outer, std::span<const Operation>(inner.begin(), inner.size()));
}

/// The majority rule: the repeated value of a non-distinct triple, or nothing
/// for pairwise-distinct triples.
std::optional<int> majority_value(int a, int b, int c);

/// A ternary operation that follows the majority rule on non-distinct triples
/// and takes `distinct_value(a, b, c)` on pairwise-distinct ones.
template <typename Fn>
Operation majority_from(int size, Fn&& distinct_value) {
  std::vector<int> table;
  table.reserve(static_cast<std::size_t>(size * size * size));
  for (int a = 1; a <= size; ++a)
    for (int b = 1; b <= size; ++b)
      for (int c = 1; c <= size; ++c) {
        auto m = majority_value(a, b, c);
        table.push_back(m ? *m : static_cast<int>(distinct_value(a, b, c)));
      }
  return make_operation(3, size, table);
}

// ---------------------------------------------------------------------------
// Structural predicates (full table scans).

std::optional<int> is_projection(const Operation& f);
bool is_idempotent(const Operation& f);
bool is_majority(const Operation& f);
bool is_near_unanimity(const Operation& f);
bool is_semiprojection(const Operation& f);
bool is_cyclically_commutative(const Operation& f);
bool is_conservative(const Operation& f);
/// f(x,y,z) = x+y+z for some Boolean group structure on the base set.
bool is_boolean_minority(const Operation& f);

// ---------------------------------------------------------------------------
// Subsets and cyclic classes.

/// A nonempty subset of {1..size}.
class Subset {
 public:
  Subset(int size, std::initializer_list<int> members);
  Subset(int size, std::span<const int> members);
  static Subset from_mask(int size, std::uint32_t mask);
  static Subset full(int size);

  int size() const noexcept { return size_; }
  std::uint32_t mask() const noexcept { return mask_; }
  int count() const noexcept;
  bool contains(int element) const noexcept {
    return element >= 1 && element <= size_ && (mask_ >> (element - 1)) & 1U;
  }
  std::vector<int> members() const;
  std::string to_string() const;

  friend bool operator==(const Subset&, const Subset&) = default;
  /// Canonical order: by cardinality, then lexicographically by members.
  friend std::strong_ordering operator<=>(const Subset& a, const Subset& b);

 private:
  Subset(int size, std::uint32_t mask, bool) : size_(size), mask_(mask) {}
  int size_;
  std::uint32_t mask_;
};

/// The orbit <abc> = {(a,b,c), (b,c,a), (c,a,b)} of a pairwise-distinct triple.
class CyclicClass {
 public:
  CyclicClass(int a, int b, int c);

  /// Rotation starting at the smallest element.
  std::array<int, 3> representative() const noexcept { return rep_; }
  std::array<std::array<int, 3>, 3> members() const noexcept;
  bool contains(int a, int b, int c) const noexcept;
  std::string to_string() const;

  friend bool operator==(const CyclicClass&, const CyclicClass&) = default;
  friend auto operator<=>(const CyclicClass&, const CyclicClass&) = default;

 private:
  std::array<int, 3> rep_;
};

/// All cyclic classes of {1..size}, sorted by representative. 8 for size 4.
std::vector<CyclicClass> cyclic_classes(int size);

/// Restriction to a subset closed under f, re-indexed in the induced order.
Operation restrict(const Operation& f, const Subset& subset);

/// Values of a ternary f on pairwise-distinct triples.
Subset range_of(const Operation& f);

// ---------------------------------------------------------------------------
// Isomorphism.

/// image[a - 1] = phi(a), 1-based.
using Bijection = std::vector<int>;

Bijection identity_bijection(int size);
Bijection inverse(const Bijection& phi);
/// All size! bijections in lexicographic order.
std::vector<Bijection> all_bijections(int size);

/// The operation g with phi(f(x)) = g(phi(x)).
Operation conjugate(const Operation& f, const Bijection& phi);

/// Some phi with phi(f(x)) = g(phi(x)) for all tuples, by exhaustive search.
std::optional<Bijection> find_isomorphism(const Operation& f, const Operation& g);

struct CanonicalForm {
  Operation form;
  /// form == conjugate(original, map)
  Bijection map;
};

/// Lexicographically least table among all conjugates.
CanonicalForm canonicalize(const Operation& f);
Operation canonical_form(const Operation& f);

std::string to_string(const Bijection& phi);

}  // namespace cloneforge
