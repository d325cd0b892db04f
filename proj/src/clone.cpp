#include "cloneforge/clone.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "cloneforge/error.hpp"

namespace cloneforge {

namespace {

constexpr std::uint32_t kNoProduction = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kEagerPairTests = 512;

void require_clone_input(const Operation& f, const char* what) {
  if (f.arity() != 3) throw AlgebraError(std::string(what) + " requires a ternary operation");
  if (f.size() > kMaxCloneSize)
    throw AlgebraError(std::string(what) + " supports base sets of at most " + std::to_string(kMaxCloneSize) +
                       " elements");
}

TernaryTable projection_table(int index, int size) {
  TernaryTable t;
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      for (int c = 0; c < size; ++c) t.v[static_cast<std::size_t>(16 * a + 4 * b + c)] = static_cast<Code>(index == 0 ? a : index == 1 ? b : c);
  return t;
}

/// Bit m set iff the subset with mask m is closed under t.
std::uint32_t closed_subsets(const TernaryTable& t, int size) {
  const std::uint32_t subsets = 1U << size;
  std::uint32_t closed = 0;
  for (std::uint32_t m = 1; m < subsets; ++m) {
    bool ok = true;
    for (int a = 0; ok && a < size; ++a) {
      if (!((m >> a) & 1U)) continue;
      for (int b = 0; ok && b < size; ++b) {
        if (!((m >> b) & 1U)) continue;
        for (int c = 0; c < size; ++c) {
          if (!((m >> c) & 1U)) continue;
          if (!((m >> t.v[static_cast<std::size_t>(16 * a + 4 * b + c)]) & 1U)) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) closed |= 1U << m;
  }
  return closed;
}

std::uint32_t range_mask(const TernaryTable& t, int size) {
  std::uint32_t mask = 0;
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      for (int c = 0; c < size; ++c)
        if (a != b && b != c && a != c) mask |= 1U << t.v[static_cast<std::size_t>(16 * a + 4 * b + c)];
  return mask;
}

std::string mask_string(std::uint32_t mask, int size) {
  return Subset::from_mask(size, mask).to_string();
}

}  // namespace

// ---------------------------------------------------------------------------

TernaryTable to_ternary_table(const Operation& f) {
  require_clone_input(f, "to_ternary_table");
  const int k = f.size();
  TernaryTable t;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        t.v[static_cast<std::size_t>(16 * a + 4 * b + c)] = f.code_at(static_cast<std::size_t>((a * k + b) * k + c));
  return t;
}

Operation from_ternary_table(const TernaryTable& t, int size) {
  std::vector<Code> codes;
  codes.reserve(static_cast<std::size_t>(size * size * size));
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      for (int c = 0; c < size; ++c) codes.push_back(t.v[static_cast<std::size_t>(16 * a + 4 * b + c)]);
  return Operation::from_codes(3, size, std::move(codes));
}

PackedTable pack(const TernaryTable& t) {
  PackedTable p;
  for (int i = 0; i < 32; ++i) p.lo |= std::uint64_t{t.v[static_cast<std::size_t>(i)]} << (2 * i);
  for (int i = 0; i < 32; ++i) p.hi |= std::uint64_t{t.v[static_cast<std::size_t>(32 + i)]} << (2 * i);
  return p;
}

TernaryTable unpack(const PackedTable& p) {
  TernaryTable t;
  for (int i = 0; i < 32; ++i) t.v[static_cast<std::size_t>(i)] = static_cast<Code>((p.lo >> (2 * i)) & 3U);
  for (int i = 0; i < 32; ++i) t.v[static_cast<std::size_t>(32 + i)] = static_cast<Code>((p.hi >> (2 * i)) & 3U);
  return t;
}

// ---------------------------------------------------------------------------

namespace {

/// Open-addressing map from 48-bit keys to member indices.
class KeyIndex {
 public:
  KeyIndex() : keys_(64, kEmpty), values_(64) {}

  /// Index stored under key, or -1.
  std::int64_t find(std::uint64_t key) const {
    for (std::size_t h = slot(key);; h = (h + 1) & (keys_.size() - 1)) {
      if (keys_[h] == key) return values_[h];
      if (keys_[h] == kEmpty) return -1;
    }
  }

  void insert(std::uint64_t key, std::uint32_t value) {
    if (2 * (count_ + 1) > keys_.size()) grow();
    place(key, value);
    ++count_;
  }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  std::size_t slot(std::uint64_t key) const {
    key ^= key >> 31;
    key *= 0x7FB5D329728EA185ULL;
    key ^= key >> 27;
    return static_cast<std::size_t>(key) & (keys_.size() - 1);
  }
  void place(std::uint64_t key, std::uint32_t value) {
    std::size_t h = slot(key);
    while (keys_[h] != kEmpty) h = (h + 1) & (keys_.size() - 1);
    keys_[h] = key;
    values_[h] = value;
  }
  void grow() {
    std::vector<std::uint64_t> old_keys(keys_.size() * 2, kEmpty);
    std::vector<std::uint32_t> old_values(keys_.size() * 2);
    old_keys.swap(keys_);
    old_values.swap(values_);
    for (std::size_t i = 0; i < old_keys.size(); ++i)
      if (old_keys[i] != kEmpty) place(old_keys[i], old_values[i]);
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> values_;
  std::size_t count_ = 0;
};

}  // namespace

/// Two modes. A majority generator only produces majority members (or the
/// projections), so members are keyed by their values on the pairwise
/// distinct triples: 6 or 24 two-bit entries. Any other generator works on
/// whole tables.
class ClosureBuilder {
 public:
  ClosureBuilder(const Operation& f, std::size_t cap) : fragment_(f) {
    require_clone_input(f, "ternary_closure");
    if (cap < 4) throw AlgebraError("closure cap must be at least 4");
    fragment_.cap_ = cap;
    generator_ = to_ternary_table(f);
    majority_ = is_majority(f);
    const int k = f.size();
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) {
          const auto p = static_cast<std::uint8_t>(16 * a + 4 * b + c);
          all_positions_.push_back(p);
          if (a != b && b != c && a != c) distinct_positions_.push_back(p);
        }
    if (majority_) {
      // Every majority member is determined by its distinct-triple values.
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < distinct_positions_.size() && total <= cap; ++i) total *= static_cast<std::uint64_t>(k);
      full_count_ = total + 3;
    }
  }

  CloneFragment run(const MemberVisitor* visit) {
    const int k = fragment_.base_size();
    for (int i = 0; i < 3; ++i)
      if (!add(projection_table(i, k), kNoSeed, visit)) return finish(false);
    if (!add(generator_, {0, 1, 2}, visit)) return finish(false);

    const auto& tables = fragment_.tables_;
    for (std::uint32_t n = 0; n < tables.size(); ++n) {
      if (majority_ && tables.size() == full_count_) break;
      if (majority_ && !chunked_ && tables.size() > kChunkThreshold) enable_chunks();
      for (std::uint32_t i = 0; i <= n; ++i)
        for (std::uint32_t j = 0; j <= n; ++j) {
          const std::uint32_t first_l = (i == n || j == n) ? 0 : n;
          for (std::uint32_t l = first_l; l <= n; ++l) {
            if (majority_ && (i == j || j == l || i == l)) continue;
            if (!produce(i, j, l, visit)) return finish(false);
          }
        }
    }
    return finish(true);
  }

 private:
  static constexpr std::array<std::uint32_t, 3> kNoSeed{kNoProduction, kNoProduction, kNoProduction};
  static constexpr std::size_t kChunkThreshold = 48;

  std::uint64_t key_of(const TernaryTable& t) const {
    std::uint64_t key = 0;
    for (std::size_t q = 0; q < distinct_positions_.size(); ++q)
      key |= std::uint64_t{t.v[distinct_positions_[q]]} << (2 * q);
    return key;
  }

  TernaryTable table_of(std::uint64_t key) const {
    const int k = fragment_.base_size();
    TernaryTable t;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        t.v[static_cast<std::size_t>(16 * a + 4 * a + b)] = static_cast<Code>(a);
        t.v[static_cast<std::size_t>(16 * a + 4 * b + a)] = static_cast<Code>(a);
        t.v[static_cast<std::size_t>(16 * b + 4 * a + a)] = static_cast<Code>(a);
      }
    for (std::size_t q = 0; q < distinct_positions_.size(); ++q)
      t.v[distinct_positions_[q]] = static_cast<Code>((key >> (2 * q)) & 3U);
    return t;
  }

  /// Lookup table for three positions at once: index (a-chunk, b-chunk, c-chunk),
  /// 6 bits each, gives the 6-bit chunk of the result.
  void enable_chunks() {
    chunk_table_.resize(std::size_t{1} << 18);
    for (std::uint32_t idx = 0; idx < chunk_table_.size(); ++idx) {
      std::uint8_t out = 0;
      for (int q = 0; q < 3; ++q) {
        const std::uint32_t a = (idx >> (12 + 2 * q)) & 3U, b = (idx >> (6 + 2 * q)) & 3U, c = (idx >> (2 * q)) & 3U;
        out |= static_cast<std::uint8_t>(generator_.v[(a << 4) | (b << 2) | c] << (2 * q));
      }
      chunk_table_[idx] = out;
    }
    chunked_ = true;
  }

  bool produce(std::uint32_t i, std::uint32_t j, std::uint32_t l, const MemberVisitor* visit) {
    if (majority_) {
      const std::uint64_t a = keys_[i], b = keys_[j], c = keys_[l];
      std::uint64_t h = 0;
      if (chunked_) {
        const std::size_t chunks = distinct_positions_.size() / 3;
        for (std::size_t q = 0; q < chunks; ++q) {
          const unsigned s = static_cast<unsigned>(6 * q);
          const std::size_t idx = (((a >> s) & 63U) << 12) | (((b >> s) & 63U) << 6) | ((c >> s) & 63U);
          h |= std::uint64_t{chunk_table_[idx]} << s;
        }
      } else {
        for (std::size_t q = 0; q < distinct_positions_.size(); ++q) {
          const unsigned s = static_cast<unsigned>(2 * q);
          h |= std::uint64_t{generator_.v[(((a >> s) & 3U) << 4) | (((b >> s) & 3U) << 2) | ((c >> s) & 3U)]} << s;
        }
      }
      if (index_.find(h) >= 0) return true;
      return add_majority(h, {i, j, l}, visit);
    }
    const auto& tables = fragment_.tables_;
    const TernaryTable& g1 = tables[i];
    const TernaryTable& g2 = tables[j];
    const TernaryTable& g3 = tables[l];
    TernaryTable h;
    for (auto p : all_positions_) h.v[p] = generator_.v[(g1.v[p] << 4) | (g2.v[p] << 2) | g3.v[p]];
    return add(h, {i, j, l}, visit);
  }

  bool room() {
    if (fragment_.tables_.size() < fragment_.cap_) return true;
    return false;
  }

  /// False means "stop": either the cap was hit or the visitor asked to.
  bool add_majority(std::uint64_t key, std::array<std::uint32_t, 3> production, const MemberVisitor* visit) {
    if (!room()) return false;
    const auto index = static_cast<std::uint32_t>(fragment_.tables_.size());
    index_.insert(key, index);
    keys_.push_back(key);
    return record(table_of(key), production, index, visit);
  }

  bool add(const TernaryTable& t, std::array<std::uint32_t, 3> production, const MemberVisitor* visit) {
    const PackedTable packed = pack(t);
    if (fragment_.index_.contains(packed)) return true;
    if (!room()) return false;
    const auto index = static_cast<std::uint32_t>(fragment_.tables_.size());
    if (majority_) {
      // Projections are not majority members; they keep their own slots and
      // are never produced again.
      const std::uint64_t key = key_of(t);
      if (production != kNoSeed) index_.insert(key, index);
      keys_.push_back(key);
    }
    return record(t, production, index, visit);
  }

  bool record(const TernaryTable& t, std::array<std::uint32_t, 3> production, std::uint32_t index,
              const MemberVisitor* visit) {
    const PackedTable packed = pack(t);
    fragment_.index_.emplace(packed, index);
    fragment_.members_.push_back(packed);
    fragment_.tables_.push_back(t);
    fragment_.productions_.push_back(production);
    return !visit || (*visit)(fragment_, index);
  }

  CloneFragment finish(bool closed) {
    fragment_.closed_ = closed;
    return std::move(fragment_);
  }

  CloneFragment fragment_;
  TernaryTable generator_;
  bool majority_ = false;
  bool chunked_ = false;
  std::uint64_t full_count_ = 0;
  std::vector<std::uint8_t> all_positions_;
  std::vector<std::uint8_t> distinct_positions_;
  std::vector<std::uint64_t> keys_;
  KeyIndex index_;
  std::vector<std::uint8_t> chunk_table_;
};

Operation CloneFragment::member(std::size_t index) const {
  return from_ternary_table(tables_.at(index), base_size());
}

std::vector<Operation> CloneFragment::members() const {
  std::vector<Operation> out;
  out.reserve(tables_.size());
  for (std::size_t i = 0; i < tables_.size(); ++i) out.push_back(member(i));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Operation> CloneFragment::nontrivial_members() const {
  std::vector<Operation> out;
  for (std::size_t i = 3; i < tables_.size(); ++i) out.push_back(member(i));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::size_t> CloneFragment::find(const TernaryTable& g) const {
  if (auto it = index_.find(pack(g)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::size_t> CloneFragment::find(const Operation& g) const {
  if (g.arity() != 3 || g.size() != base_size()) throw AlgebraError("fragment lookup with mismatched operation");
  return find(to_ternary_table(g));
}

std::optional<std::array<std::uint32_t, 3>> CloneFragment::production(std::size_t index) const {
  const auto& p = productions_.at(index);
  if (p[0] == kNoProduction) return std::nullopt;
  return p;
}

Term CloneFragment::witness_term(std::size_t index) const {
  std::unordered_map<std::size_t, Term> memo;
  auto go = [&](auto&& self, std::size_t i) -> Term {
    if (i < 3) return Term::variable(static_cast<int>(i) + 1);
    if (auto it = memo.find(i); it != memo.end()) return it->second;
    const auto& p = productions_[i];
    Term t = Term::apply(self(self, p[0]), self(self, p[1]), self(self, p[2]));
    memo.emplace(i, t);
    return t;
  };
  return go(go, index);
}

CloneFragment ternary_closure(const Operation& f, std::size_t cap) {
  return ClosureBuilder(f, cap).run(nullptr);
}

CloneFragment ternary_closure(const Operation& f, std::size_t cap, const MemberVisitor& visit) {
  return ClosureBuilder(f, cap).run(&visit);
}

bool contains(const CloneFragment& fragment, const Operation& g) {
  if (!fragment.closed()) throw CapExceeded("membership query on a fragment that is not closed");
  return fragment.find(g).has_value();
}

bool generates(const Operation& f, const Operation& g, std::size_t cap) {
  if (g.arity() != 3 || g.size() != f.size()) throw AlgebraError("generates needs ternary operations of equal size");
  const auto target = pack(to_ternary_table(g));
  bool found = false;
  MemberVisitor visit = [&](const CloneFragment& frag, std::size_t index) {
    found = pack(frag.table(index)) == target;
    return !found;
  };
  const auto fragment = ternary_closure(f, cap, visit);
  if (found) return true;
  if (!fragment.closed()) throw CapExceeded("closure exceeded cap " + std::to_string(cap));
  return false;
}

std::vector<Operation> majority_members(const Operation& f, std::size_t cap) {
  if (f.arity() != 3 || !is_majority(f)) throw PreconditionError("majority_members requires a majority operation");
  const auto fragment = ternary_closure(f, cap);
  if (!fragment.closed()) throw CapExceeded("closure exceeded cap " + std::to_string(cap));
  return fragment.nontrivial_members();
}

std::string_view reason_name(WitnessReason reason) {
  switch (reason) {
    case WitnessReason::SubsetEscape: return "subset-escape";
    case WitnessReason::RangeEscape: return "range-escape";
    case WitnessReason::NoReturnGeneration: return "no-return-generation";
  }
  return "no-return-generation";
}

std::string_view verdict_name(MinimalityVerdict::Kind kind) {
  switch (kind) {
    case MinimalityVerdict::Kind::Minimal: return "Minimal";
    case MinimalityVerdict::Kind::NotMinimal: return "NotMinimal";
    case MinimalityVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

/// Subset- and range-escape test of one member against the generator's data.
std::optional<std::pair<WitnessReason, std::string>> escape_of(const TernaryTable& g, int size,
                                                               std::uint32_t f_closed, std::uint32_t f_range) {
  const std::uint32_t extra = closed_subsets(g, size) & ~f_closed;
  if (extra) {
    const auto m = static_cast<std::uint32_t>(std::countr_zero(extra));
    return std::pair{WitnessReason::SubsetEscape, "preserves " + mask_string(m, size) + ", which f does not"};
  }
  const std::uint32_t missing = f_range & ~range_mask(g, size);
  if (missing) {
    const int a = std::countr_zero(missing) + 1;
    return std::pair{WitnessReason::RangeEscape, "range misses " + std::to_string(a) + ", which is in range(f)"};
  }
  return std::nullopt;
}

}  // namespace

std::optional<NonMinimalityWitness> quick_nonminimality_witness(const Operation& f, std::size_t cap) {
  if (f.arity() != 3 || !is_majority(f)) throw PreconditionError("quick_nonminimality_witness requires a majority operation");
  const int k = f.size();
  const auto ft = to_ternary_table(f);
  const std::uint32_t f_closed = closed_subsets(ft, k);
  const std::uint32_t f_range = range_mask(ft, k);
  std::optional<NonMinimalityWitness> found;
  MemberVisitor visit = [&](const CloneFragment& frag, std::size_t index) {
    if (index < 3) return true;
    if (auto e = escape_of(frag.table(index), k, f_closed, f_range)) {
      found = NonMinimalityWitness{frag.member(index), e->first, e->second};
      return false;
    }
    return true;
  };
  ternary_closure(f, cap, visit);
  return found;
}

std::optional<Relation> binary_escape(const Operation& g, const Operation& f) {
  require_clone_input(g, "binary_escape");
  require_clone_input(f, "binary_escape");
  if (g.size() != f.size()) throw AlgebraError("binary_escape needs operations on the same base set");
  if (!is_majority(g) || !is_majority(f)) throw PreconditionError("binary_escape requires majority operations");
  const int k = f.size();
  const int pairs = k * k;
  const auto gt = to_ternary_table(g), ft = to_ternary_table(f);

  // Operations applied coordinatewise to pairs p = k*a + b.
  auto on_pairs = [&](const TernaryTable& t) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(pairs * pairs * pairs));
    for (int p1 = 0; p1 < pairs; ++p1)
      for (int p2 = 0; p2 < pairs; ++p2)
        for (int p3 = 0; p3 < pairs; ++p3) {
          const int a = t.v[static_cast<std::size_t>(16 * (p1 / k) + 4 * (p2 / k) + p3 / k)];
          const int b = t.v[static_cast<std::size_t>(16 * (p1 % k) + 4 * (p2 % k) + p3 % k)];
          out[static_cast<std::size_t>((p1 * pairs + p2) * pairs + p3)] = static_cast<std::uint8_t>(a * k + b);
        }
    return out;
  };
  const auto gp = on_pairs(gt);
  const auto fp = on_pairs(ft);
  auto at = [&](const std::vector<std::uint8_t>& op, int p1, int p2, int p3) {
    return op[static_cast<std::size_t>((p1 * pairs + p2) * pairs + p3)];
  };

  std::vector<int> elems;
  elems.reserve(16);
  for (int p1 = 0; p1 < pairs; ++p1)
    for (int p2 = p1 + 1; p2 < pairs; ++p2)
      for (int p3 = p2 + 1; p3 < pairs; ++p3) {
        // Subuniverse of (A; g)^2 generated by {p1, p2, p3}.
        std::uint32_t mask = (1U << p1) | (1U << p2) | (1U << p3);
        elems.assign({p1, p2, p3});
        for (std::size_t n = 0; n < elems.size(); ++n)
          for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j) {
              const std::size_t first_l = (i == n || j == n) ? 0 : n;
              for (std::size_t l = first_l; l <= n; ++l) {
                if (i == j || j == l || i == l) continue;
                const int r = at(gp, elems[i], elems[j], elems[l]);
                if (!((mask >> r) & 1U)) {
                  mask |= 1U << r;
                  elems.push_back(r);
                }
              }
            }
        const std::array<std::array<int, 3>, 6> orders{{{p1, p2, p3}, {p1, p3, p2}, {p2, p1, p3},
                                                        {p2, p3, p1}, {p3, p1, p2}, {p3, p2, p1}}};
        for (const auto& o : orders) {
          if ((mask >> at(fp, o[0], o[1], o[2])) & 1U) continue;
          std::vector<std::vector<int>> tuples;
          for (int p = 0; p < pairs; ++p)
            if ((mask >> p) & 1U) tuples.push_back({p / k + 1, p % k + 1});
          return Relation(2, k, std::move(tuples));
        }
      }
  return std::nullopt;
}

bool FragmentCache::generates(const Operation& g, const Operation& f, std::size_t cap) {
  const auto canon = canonicalize(g);
  const auto key = pack(to_ternary_table(canon.form));
  const Operation target = conjugate(f, canon.map);
  {
    std::shared_lock lock(mutex_);
    if (auto it = fragments_.find(key); it != fragments_.end()) return it->second->find(target).has_value();
    if (overflow_.contains(key)) throw CapExceeded("closure exceeded cap " + std::to_string(cap));
  }
  auto fragment = std::make_shared<const CloneFragment>(ternary_closure(canon.form, cap));
  std::unique_lock lock(mutex_);
  if (!fragment->closed()) {
    overflow_.emplace(key, true);
    throw CapExceeded("closure exceeded cap " + std::to_string(cap));
  }
  auto [it, inserted] = fragments_.emplace(key, std::move(fragment));
  return it->second->find(target).has_value();
}

std::size_t FragmentCache::size() const {
  std::shared_lock lock(mutex_);
  return fragments_.size();
}

MinimalityVerdict is_minimal_majority(const Operation& f, std::size_t cap, FragmentCache* cache) {
  if (f.arity() != 3 || !is_majority(f)) throw PreconditionError("is_minimal_majority requires a majority operation");
  require_clone_input(f, "is_minimal_majority");
  const int k = f.size();
  const auto ft = to_ternary_table(f);
  const std::uint32_t f_closed = closed_subsets(ft, k);
  const std::uint32_t f_range = range_mask(ft, k);

  MinimalityVerdict verdict;
  auto pair_witness = [&](const Operation& g) {
    if (auto rho = binary_escape(g, f)) {
      verdict.kind = MinimalityVerdict::Kind::NotMinimal;
      verdict.witness = g;
      verdict.reason = WitnessReason::NoReturnGeneration;
      verdict.detail = "preserves " + rho->to_string() + ", which f does not";
      return true;
    }
    return false;
  };
  // A member with a binary invariant that f lacks cannot generate f. Early
  // members are tested as they appear, later ones at power-of-two indices.
  std::vector<bool> pair_tested;
  MemberVisitor visit = [&](const CloneFragment& frag, std::size_t index) {
    pair_tested.push_back(false);
    if (index < 3) return true;
    if (auto e = escape_of(frag.table(index), k, f_closed, f_range)) {
      verdict.kind = MinimalityVerdict::Kind::NotMinimal;
      verdict.witness = frag.member(index);
      verdict.reason = e->first;
      verdict.detail = e->second;
      return false;
    }
    if (index > 3 && (index < kEagerPairTests || std::has_single_bit(index))) {
      pair_tested[index] = true;
      if (pair_witness(frag.member(index))) return false;
    }
    return true;
  };
  const auto fragment = ternary_closure(f, cap, visit);
  verdict.members_seen = fragment.size();
  if (verdict.kind == MinimalityVerdict::Kind::NotMinimal) return verdict;

  // Remaining members: table order when the fragment is closed, discovery
  // order otherwise.
  std::vector<std::size_t> order;
  for (std::size_t i = 4; i < fragment.size(); ++i) order.push_back(i);
  if (fragment.closed())
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(fragment.table(a).v.begin(), fragment.table(a).v.end(),
                                          fragment.table(b).v.begin(), fragment.table(b).v.end());
    });
  for (std::size_t i : order)
    if (!pair_tested[i] && pair_witness(fragment.member(i))) return verdict;
  if (!fragment.closed()) {
    verdict.kind = MinimalityVerdict::Kind::Inconclusive;
    verdict.detail = "closure exceeded cap " + std::to_string(cap);
    return verdict;
  }

  // Every member passed the pair test; confirm by building each closure.
  FragmentCache local;
  FragmentCache& memo = cache ? *cache : local;
  for (const auto& g : fragment.nontrivial_members()) {
    // The closure of g lies inside the closed closure of f, so it fits the cap.
    if (!memo.generates(g, f, cap)) {
      verdict.kind = MinimalityVerdict::Kind::NotMinimal;
      verdict.witness = g;
      verdict.reason = WitnessReason::NoReturnGeneration;
      verdict.detail = "f is not in the closure of this member";
      return verdict;
    }
  }
  verdict.kind = MinimalityVerdict::Kind::Minimal;
  return verdict;
}

}  // namespace cloneforge
