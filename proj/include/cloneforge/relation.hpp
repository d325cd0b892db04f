#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cloneforge/operation.hpp"

namespace cloneforge {

/// A finitary relation on {1..size}: a deduplicated, sorted set of tuples.
class Relation {
 public:
  Relation(int arity, int size, std::vector<std::vector<int>> tuples);
  static Relation unary(const Subset& subset);

  int arity() const noexcept { return arity_; }
  int size() const noexcept { return size_; }
  const std::vector<std::vector<int>>& tuples() const noexcept { return tuples_; }
  bool contains(std::span<const int> tuple) const;
  std::string to_string() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  int arity_;
  int size_;
  std::vector<std::vector<int>> tuples_;
  std::vector<bool> member_;  // indexed by tuple_index
};

/// True iff applying f componentwise to any n rho-tuples lands in rho.
/// Exhaustive over |rho|^n choices.
bool preserves(const Operation& f, const Relation& rho);

/// The equivalence relation with the given blocks. The blocks must partition
/// {1..k}, where k is the common base size of the subsets.
Relation partition_relation(std::span<const Subset> blocks);

/// All nonempty subsets closed under f, by cardinality then lexicographically.
std::vector<Subset> preserved_subsets(const Operation& f);

/// Bit i set iff the subset with mask i is closed under f (index 0 unused).
std::vector<bool> preserved_subset_table(const Operation& f);

/// Parses `{(1,1),(1,4)}` (a relation) or `{2,3,4}` (a unary relation).
Relation parse_relation(std::string_view text, int size);

}  // namespace cloneforge
