#include "cloneforge/catalog.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "cloneforge/error.hpp"

namespace cloneforge {

namespace {

// The generators on {1,2,3,4}. The two subset rows mean value 4 on every
// distinct triple from {1,2,4} and from {1,3,4}.
const PrintedTable kGenerators{
    "M",
    4,
    {"M1", "M2", "M3"},
    {"(1,2,3)", "(2,3,1)", "(3,1,2)", "(2,1,3)", "(1,3,2)", "(3,2,1)", "{1,2,4}", "{1,3,4}", "(4,2,3)", "(2,3,4)",
     "(3,4,2)", "(2,4,3)", "(4,3,2)", "(3,2,4)"},
    {
        {4, 4, 3},
        {4, 2, 3},
        {4, 3, 3},
        {4, 2, 4},
        {4, 4, 4},
        {4, 3, 4},
        {4, 4, 4},
        {4, 4, 4},
        {4, 4, 3},
        {4, 2, 3},
        {4, 3, 3},
        {4, 2, 4},
        {4, 4, 4},
        {4, 3, 4},
    },
};

const PrintedTable kMembers3{
    "members3",
    3,
    {"m1", "m2", "", "", "m3", "", "", "", "", "", "", ""},
    {"(1,2,3)", "(2,3,1)", "(3,1,2)", "(2,1,3)", "(1,3,2)", "(3,2,1)"},
    {
        {1, 1, 2, 3, 2, 3, 2, 2, 3, 2, 3, 3},
        {1, 2, 3, 1, 2, 2, 2, 3, 3, 3, 3, 2},
        {1, 3, 1, 2, 2, 2, 3, 2, 3, 3, 2, 3},
        {1, 2, 1, 3, 3, 3, 2, 3, 2, 2, 3, 2},
        {1, 1, 3, 2, 3, 2, 3, 3, 2, 3, 2, 2},
        {1, 3, 2, 1, 3, 3, 3, 2, 2, 2, 2, 3},
    },
};

const PrintedTable kMembers4{
    "members4",
    4,
    {"M1", "M2", "", "", "M3", "", "", "", "", "", "", ""},
    {"(1,2,3)", "(2,3,1)", "(3,1,2)", "(2,1,3)", "(1,3,2)", "(3,2,1)", "{1,2,4}", "{1,3,4}", "(4,2,3)", "(2,3,4)",
     "(3,4,2)", "(2,4,3)", "(4,3,2)", "(3,2,4)"},
    {
        {4, 4, 2, 3, 3, 3, 4, 3, 4, 4, 3, 4},
        {4, 2, 3, 4, 3, 4, 3, 3, 4, 3, 4, 4},
        {4, 3, 4, 2, 3, 3, 3, 4, 4, 4, 4, 3},
        {4, 2, 4, 3, 4, 3, 4, 4, 3, 4, 3, 3},
        {4, 4, 3, 2, 4, 4, 4, 3, 3, 3, 3, 4},
        {4, 3, 2, 4, 4, 4, 3, 4, 3, 3, 4, 3},
        {4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4},
        {4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4},
        {4, 4, 2, 3, 3, 3, 4, 3, 4, 4, 3, 4},
        {4, 2, 3, 4, 3, 4, 3, 3, 4, 3, 4, 4},
        {4, 3, 4, 2, 3, 3, 3, 4, 4, 4, 4, 3},
        {4, 2, 4, 3, 4, 3, 4, 4, 3, 4, 3, 3},
        {4, 4, 3, 2, 4, 4, 4, 3, 3, 3, 3, 4},
        {4, 3, 2, 4, 4, 4, 3, 4, 3, 3, 4, 3},
    },
};

std::vector<int> label_elements(const std::string& label) {
  std::vector<int> out;
  for (char c : label)
    if (c >= '1' && c <= '9') out.push_back(c - '0');
  return out;
}

}  // namespace

Operation PrintedTable::column(std::size_t c) const {
  if (c >= columns()) throw AlgebraError("table " + name + " has no column " + std::to_string(c));
  std::vector<int> table(static_cast<std::size_t>(size * size * size), 0);
  auto set = [&](int a, int b, int d, int v) {
    table[static_cast<std::size_t>(((a - 1) * size + (b - 1)) * size + (d - 1))] = v;
  };
  for (int a = 1; a <= size; ++a)
    for (int b = 1; b <= size; ++b)
      for (int d = 1; d <= size; ++d)
        if (auto m = majority_value(a, b, d)) set(a, b, d, *m);
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    const auto e = label_elements(row_labels[r]);
    const int v = rows[r][c];
    if (row_labels[r].front() == '(') {
      set(e[0], e[1], e[2], v);
    } else {
      std::array<int, 3> t{e[0], e[1], e[2]};
      do set(t[0], t[1], t[2], v);
      while (std::next_permutation(t.begin(), t.end()));
    }
  }
  if (std::count(table.begin(), table.end(), 0) != 0)
    throw AlgebraError("table " + name + " leaves some triples undefined");
  return make_operation(3, size, table);
}

std::vector<Operation> PrintedTable::block(std::string_view block) const {
  std::vector<Operation> out;
  for (std::size_t c = 0; c < columns(); ++c) {
    if (headers[c] != block) continue;
    out.push_back(column(c));
    for (std::size_t d = c + 1; d < columns() && headers[d].empty(); ++d) out.push_back(column(d));
    return out;
  }
  throw AlgebraError("table " + name + " has no block " + std::string(block));
}

const PrintedTable& printed_table(std::string_view name) {
  if (name == "M") return kGenerators;
  if (name == "members3") return kMembers3;
  if (name == "members4") return kMembers4;
  throw AlgebraError("unknown table '" + std::string(name) + "' (expected M, members3 or members4)");
}

Operation m_table(int i) {
  if (i < 1 || i > 3) throw AlgebraError("m_table index must be 1, 2 or 3");
  return majority_from(3, [i](int a, int b, int c) {
    if (i == 1) return 1;
    if (i == 2) return a;
    const std::array<int, 3> x{a, b, c};
    for (int k = 0; k < 3; ++k)
      if (x[static_cast<std::size_t>(k)] == 1) return x[static_cast<std::size_t>((k + 1) % 3)];
    return 0;
  });
}

Operation M_table(int i) {
  if (i < 1 || i > 3) throw AlgebraError("M_table index must be 1, 2 or 3");
  return kGenerators.column(static_cast<std::size_t>(i - 1));
}

std::optional<Operation> named_table(std::string_view name) {
  if (name.size() != 2 || (name[0] != 'm' && name[0] != 'M') || name[1] < '1' || name[1] > '3') return std::nullopt;
  const int i = name[1] - '0';
  return name[0] == 'm' ? m_table(i) : M_table(i);
}

std::vector<Operation> printed_members(std::string_view name) {
  if (!named_table(name)) throw AlgebraError("unknown table '" + std::string(name) + "'");
  return printed_table(name[0] == 'm' ? "members3" : "members4").block(name);
}

ThreeElementClass classify_three_element(const Operation& f, std::size_t cap, FragmentCache* cache) {
  if (f.arity() != 3 || f.size() != 3) throw AlgebraError("classify_three_element needs a ternary operation on 3 elements");
  if (!is_majority(f)) throw PreconditionError("classify_three_element requires a majority operation");
  ThreeElementClass out;
  out.verdict = is_minimal_majority(f, cap, cache);
  if (!out.verdict.minimal()) return out;
  const auto members = majority_members(f, cap);
  out.majority_members = members.size();
  const int type = members.size() == 1 ? 1 : members.size() == 3 ? 2 : members.size() == 8 ? 3 : 0;
  if (type == 0) return out;
  const Operation target = m_table(type);
  for (const auto& g : members) {
    if (auto phi = find_isomorphism(g, target)) {
      out.type = type;
      out.bijection = *phi;
      out.member = g;
      return out;
    }
  }
  return out;
}

Operation glue_conservative(const ConservativeSpec& spec, int size) {
  if (size < 3 || size > kMaxSize) throw AlgebraError("glue_conservative size out of range");
  for (const auto& [subset, component] : spec) {
    if (subset.size() != size || subset.count() != 3)
      throw AlgebraError("conservative spec key " + subset.to_string() + " is not a 3-subset of the base set");
    if (component.arity() != 3 || component.size() != 3 || !is_majority(component))
      throw PreconditionError("component on " + subset.to_string() + " is not a majority operation on 3 elements");
  }
  return majority_from(size, [&](int a, int b, int c) {
    const Subset key(size, {a, b, c});
    const auto it = spec.find(key);
    if (it == spec.end()) throw AlgebraError("conservative spec has no component on " + key.to_string());
    const auto members = key.members();
    auto local = [&](int x) {
      return static_cast<int>(std::find(members.begin(), members.end(), x) - members.begin()) + 1;
    };
    return members[static_cast<std::size_t>(it->second({local(a), local(b), local(c)}) - 1)];
  });
}

ConservativeSpec conservative_spec(const Operation& f) {
  if (f.arity() != 3) throw AlgebraError("conservative_spec needs a ternary operation");
  ConservativeSpec spec;
  const int k = f.size();
  for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
    if (std::popcount(mask) != 3) continue;
    const auto subset = Subset::from_mask(k, mask);
    spec.emplace(subset, restrict(f, subset));
  }
  return spec;
}

}  // namespace cloneforge
