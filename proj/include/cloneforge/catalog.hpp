#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloneforge/clone.hpp"
#include "cloneforge/operation.hpp"

namespace cloneforge {

/// One of the printed tables, kept as text rows exactly as they appear. A row
/// label is either a triple "(a,b,c)" or a subset "{a,b,c}"; a subset row gives
/// the value on every pairwise-distinct triple drawn from it. Unlisted triples
/// follow the majority rule.
struct PrintedTable {
  std::string name;
  int size = 0;
  /// Column headers; an empty header continues the previous block.
  std::vector<std::string> headers;
  std::vector<std::string> row_labels;
  /// rows[r][c], 1-based values.
  std::vector<std::vector<int>> rows;

  std::size_t columns() const { return headers.size(); }
  Operation column(std::size_t c) const;
  /// Columns of the block that starts at the header `block`.
  std::vector<Operation> block(std::string_view block) const;
};

/// "M" (the three generators on {1,2,3,4}), "members3" and "members4" (the
/// two 12-column member tables).
const PrintedTable& printed_table(std::string_view name);

/// m1 = 1, m2 = first argument, m3 = x_{i+1} where x_i = 1, on distinct triples.
Operation m_table(int i);
Operation M_table(int i);

/// m1..m3 and M1..M3 by name.
std::optional<Operation> named_table(std::string_view name);
inline constexpr std::array<std::string_view, 6> kTableNames{"m1", "m2", "m3", "M1", "M2", "M3"};

/// The printed members of [m_i] or [M_i] (name as in kTableNames).
std::vector<Operation> printed_members(std::string_view name);

struct ThreeElementClass {
  MinimalityVerdict verdict;
  int type = 0;  // 1..3 when minimal and classified, 0 otherwise
  std::size_t majority_members = 0;
  /// phi with phi(g(x)) = m_type(phi(x)) for the member g below.
  Bijection bijection;
  std::optional<Operation> member;

  bool minimal() const { return verdict.minimal(); }
  bool classified() const { return type != 0; }
};

/// Decides minimality of a majority f on three elements, then finds which m_i
/// has an isomorphic copy in [f]. The member count (1, 3 or 8) picks the
/// candidate type before the bijection search.
ThreeElementClass classify_three_element(const Operation& f, std::size_t cap = kDefaultCap,
                                         FragmentCache* cache = nullptr);

/// A majority operation on each three-element subset of {1..4}, re-indexed
/// over {1,2,3} in increasing order.
using ConservativeSpec = std::map<Subset, Operation>;

/// The majority operation whose restriction to each three-element subset B is
/// spec[B]. Each component must be majority.
Operation glue_conservative(const ConservativeSpec& spec, int size = 4);

/// Restrictions of f to its three-element subsets; all must be closed.
ConservativeSpec conservative_spec(const Operation& f);

}  // namespace cloneforge
