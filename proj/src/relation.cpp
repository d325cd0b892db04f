#include "cloneforge/relation.hpp"

#include <algorithm>
#include <cctype>

#include "cloneforge/error.hpp"

namespace cloneforge {

Relation::Relation(int arity, int size, std::vector<std::vector<int>> tuples)
    : arity_(arity), size_(size), tuples_(std::move(tuples)) {
  if (arity < 1 || arity > kMaxArity) throw AlgebraError("relation arity out of range");
  if (size < 1 || size > kMaxSize) throw AlgebraError("relation base size out of range");
  for (const auto& t : tuples_) {
    if (static_cast<int>(t.size()) != arity) throw AlgebraError("relation tuple has wrong arity");
    for (int v : t)
      if (v < 1 || v > size) throw AlgebraError("relation entry " + std::to_string(v) + " out of range");
  }
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
  member_.assign(table_length(arity, size), false);
  for (const auto& t : tuples_) member_[tuple_index(size, t)] = true;
}

Relation Relation::unary(const Subset& subset) {
  std::vector<std::vector<int>> tuples;
  for (int a : subset.members()) tuples.push_back({a});
  return Relation(1, subset.size(), std::move(tuples));
}

bool Relation::contains(std::span<const int> tuple) const {
  if (static_cast<int>(tuple.size()) != arity_) return false;
  for (int v : tuple)
    if (v < 1 || v > size_) return false;
  return member_[tuple_index(size_, tuple)];
}

std::string Relation::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    if (i) s += ',';
    if (arity_ == 1) {
      s += std::to_string(tuples_[i][0]);
      continue;
    }
    s += '(';
    for (std::size_t j = 0; j < tuples_[i].size(); ++j) s += (j ? "," : "") + std::to_string(tuples_[i][j]);
    s += ')';
  }
  return s + "}";
}

bool preserves(const Operation& f, const Relation& rho) {
  if (f.size() != rho.size()) throw AlgebraError("operation and relation have different base sizes");
  const auto& rows = rho.tuples();
  if (rows.empty()) return true;
  const auto n = static_cast<std::size_t>(f.arity());
  const auto k = static_cast<std::size_t>(rho.arity());
  // choice[j] picks the rho-tuple used as the j-th argument column.
  std::vector<std::size_t> choice(n, 0);
  std::vector<int> args(n), image(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < n; ++j) args[j] = rows[choice[j]][i];
      image[i] = f(args);
    }
    if (!rho.contains(image)) return false;
    std::size_t j = n;
    while (j > 0 && ++choice[j - 1] == rows.size()) choice[--j] = 0;
    if (j == 0) return true;
  }
}

Relation partition_relation(std::span<const Subset> blocks) {
  if (blocks.empty()) throw AlgebraError("partition needs at least one block");
  const int size = blocks.front().size();
  std::uint32_t seen = 0;
  for (const auto& b : blocks) {
    if (b.size() != size) throw AlgebraError("partition blocks have different base sizes");
    if (seen & b.mask()) throw AlgebraError("partition blocks overlap at " + b.to_string());
    seen |= b.mask();
  }
  if (seen != (1U << size) - 1) throw AlgebraError("partition blocks do not cover {1.." + std::to_string(size) + "}");
  std::vector<std::vector<int>> tuples;
  for (const auto& b : blocks)
    for (int x : b.members())
      for (int y : b.members()) tuples.push_back({x, y});
  return Relation(2, size, std::move(tuples));
}

std::vector<bool> preserved_subset_table(const Operation& f) {
  const int k = f.size();
  const std::uint32_t count = 1U << k;
  std::vector<bool> closed(count, false);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    bool ok = true;
    for (std::size_t idx = 0; ok && idx < f.table_size(); ++idx) {
      std::size_t rest = idx;
      bool inside = true;
      for (int j = 0; j < f.arity() && inside; ++j) {
        inside = (mask >> (rest % static_cast<std::size_t>(k))) & 1U;
        rest /= static_cast<std::size_t>(k);
      }
      if (inside && !((mask >> f.code_at(idx)) & 1U)) ok = false;
    }
    closed[mask] = ok;
  }
  return closed;
}

std::vector<Subset> preserved_subsets(const Operation& f) {
  const auto closed = preserved_subset_table(f);
  std::vector<Subset> out;
  for (std::uint32_t mask = 1; mask < closed.size(); ++mask)
    if (closed[mask]) out.push_back(Subset::from_mask(f.size(), mask));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class RelationParser {
 public:
  explicit RelationParser(std::string_view text) : text_(text) {}

  Relation parse(int size) {
    expect('{');
    std::vector<std::vector<int>> tuples;
    int arity = 0;
    skip_ws();
    if (peek() == '}') throw AlgebraError("empty relation literal");
    while (true) {
      skip_ws();
      std::vector<int> t;
      if (peek() == '(') {
        ++pos_;
        t.push_back(number());
        while (skip_ws(), peek() == ',') {
          ++pos_;
          t.push_back(number());
        }
        expect(')');
      } else {
        t.push_back(number());
      }
      if (arity == 0) arity = static_cast<int>(t.size());
      if (static_cast<int>(t.size()) != arity) throw AlgebraError("relation literal mixes tuple lengths");
      tuples.push_back(std::move(t));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      break;
    }
    skip_ws();
    if (pos_ != text_.size()) throw AlgebraError("trailing characters after relation literal");
    return Relation(arity, size, std::move(tuples));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c)
      throw AlgebraError(std::string("relation literal: expected '") + c + "' at position " + std::to_string(pos_));
    ++pos_;
  }
  int number() {
    skip_ws();
    int v = 0;
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) v = v * 10 + (text_[pos_++] - '0');
    if (start == pos_) throw AlgebraError("relation literal: expected a number at position " + std::to_string(start));
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Relation parse_relation(std::string_view text, int size) { return RelationParser(text).parse(size); }

}  // namespace cloneforge
