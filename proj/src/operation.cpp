#include "cloneforge/operation.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "cloneforge/error.hpp"

namespace cloneforge {

namespace {

void check_dimensions(int arity, int size) {
  if (arity < 1 || arity > kMaxArity)
    throw AlgebraError("arity " + std::to_string(arity) + " outside 1.." + std::to_string(kMaxArity));
  if (size < 2 || size > kMaxSize)
    throw AlgebraError("size " + std::to_string(size) + " outside 2.." + std::to_string(kMaxSize));
}

void require_ternary(const Operation& f, const char* what) {
  if (f.arity() != 3)
    throw AlgebraError(std::string(what) + " requires a ternary operation, got arity " +
                       std::to_string(f.arity()));
}

std::string tuple_string(std::span<const int> t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s + ")";
}

bool pairwise_distinct(std::span<const int> t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j]) return false;
  return true;
}

}  // namespace

std::size_t table_length(int arity, int size) {
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i) n *= static_cast<std::size_t>(size);
  return n;
}

std::size_t tuple_index(int size, std::span<const int> tuple) {
  std::size_t index = 0;
  for (int v : tuple) {
    if (v < 1 || v > size) throw AlgebraError("element " + std::to_string(v) + " outside 1.." + std::to_string(size));
    index = index * static_cast<std::size_t>(size) + static_cast<std::size_t>(v - 1);
  }
  return index;
}

std::vector<int> index_tuple(int size, int arity, std::size_t index) {
  std::vector<int> t(static_cast<std::size_t>(arity));
  for (int i = arity - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(size)) + 1;
    index /= static_cast<std::size_t>(size);
  }
  return t;
}

Operation Operation::from_codes(int arity, int size, std::vector<Code> codes) {
  check_dimensions(arity, size);
  const std::size_t expected = table_length(arity, size);
  if (codes.size() != expected)
    throw AlgebraError("table length " + std::to_string(codes.size()) + " ≠ " + std::to_string(expected));
  for (std::size_t i = 0; i < codes.size(); ++i)
    if (codes[i] >= size)
      throw AlgebraError("entry out of range at index " + std::to_string(i) + ": " +
                         std::to_string(int{codes[i]} + 1));
  return Operation(arity, size, std::move(codes));
}

int Operation::operator()(std::span<const int> args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw AlgebraError("expected " + std::to_string(arity_) + " arguments, got " + std::to_string(args.size()));
  return codes_[tuple_index(size_, args)] + 1;
}

std::vector<int> Operation::values() const {
  std::vector<int> out(codes_.size());
  std::transform(codes_.begin(), codes_.end(), out.begin(), [](Code c) { return int{c} + 1; });
  return out;
}

Operation make_operation(int arity, int size, std::span<const int> table) {
  check_dimensions(arity, size);
  const std::size_t expected = table_length(arity, size);
  if (table.size() != expected)
    throw AlgebraError("table length " + std::to_string(table.size()) + " ≠ " + std::to_string(expected));
  std::vector<Code> codes(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] < 1 || table[i] > size)
      throw AlgebraError("entry out of range at index " + std::to_string(i) + ": " + std::to_string(table[i]));
    codes[i] = static_cast<Code>(table[i] - 1);
  }
  return Operation::from_codes(arity, size, std::move(codes));
}

Operation projection(int arity, int index, int size) {
  check_dimensions(arity, size);
  if (index < 1 || index > arity)
    throw AlgebraError("projection index " + std::to_string(index) + " outside 1.." + std::to_string(arity));
  const std::size_t n = table_length(arity, size);
  std::size_t stride = table_length(arity - index, size);
  std::vector<Code> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = static_cast<Code>((i / stride) % static_cast<std::size_t>(size));
  return Operation::from_codes(arity, size, std::move(codes));
}

Operation compose(const Operation& outer, std::span<const Operation> inner) {
  if (static_cast<int>(inner.size()) != outer.arity())
    throw AlgebraError("outer arity " + std::to_string(outer.arity()) + " but " + std::to_string(inner.size()) +
                       " inner operations");
  const int m = inner.front().arity();
  for (const auto& g : inner) {
    if (g.arity() != m) throw AlgebraError("inner operations have different arities");
    if (g.size() != outer.size()) throw AlgebraError("size mismatch in compose");
  }
  const std::size_t n = table_length(m, outer.size());
  const auto size = static_cast<std::size_t>(outer.size());
  std::vector<Code> codes(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t index = 0;
    for (const auto& g : inner) index = index * size + g.code_at(t);
    codes[t] = outer.code_at(index);
  }
  return Operation::from_codes(m, outer.size(), std::move(codes));
}

std::optional<int> majority_value(int a, int b, int c) {
  if (a == b || a == c) return a;
  if (b == c) return b;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::optional<int> is_projection(const Operation& f) {
  for (int i = 1; i <= f.arity(); ++i)
    if (f == projection(f.arity(), i, f.size())) return i;
  return std::nullopt;
}

bool is_idempotent(const Operation& f) {
  std::vector<int> t(static_cast<std::size_t>(f.arity()));
  for (int x = 1; x <= f.size(); ++x) {
    std::fill(t.begin(), t.end(), x);
    if (f(t) != x) return false;
  }
  return true;
}

bool is_majority(const Operation& f) {
  require_ternary(f, "is_majority");
  for (int x = 1; x <= f.size(); ++x)
    for (int y = 1; y <= f.size(); ++y)
      if (f({x, x, y}) != x || f({x, y, x}) != x || f({y, x, x}) != x) return false;
  return true;
}

bool is_near_unanimity(const Operation& f) {
  std::vector<int> t(static_cast<std::size_t>(f.arity()));
  for (int x = 1; x <= f.size(); ++x)
    for (int y = 1; y <= f.size(); ++y)
      for (std::size_t pos = 0; pos < t.size(); ++pos) {
        std::fill(t.begin(), t.end(), x);
        t[pos] = y;
        if (f(t) != x) return false;
      }
  return true;
}

bool is_semiprojection(const Operation& f) {
  if (f.arity() < 3) throw AlgebraError("is_semiprojection requires arity >= 3");
  for (int i = 0; i < f.arity(); ++i) {
    bool ok = true;
    for (std::size_t idx = 0; ok && idx < f.table_size(); ++idx) {
      auto t = index_tuple(f.size(), f.arity(), idx);
      if (!pairwise_distinct(t) && f.code_at(idx) + 1 != t[static_cast<std::size_t>(i)]) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

bool is_cyclically_commutative(const Operation& f) {
  require_ternary(f, "is_cyclically_commutative");
  for (int x = 1; x <= f.size(); ++x)
    for (int y = 1; y <= f.size(); ++y)
      for (int z = 1; z <= f.size(); ++z)
        if (f({x, y, z}) != f({y, z, x})) return false;
  return true;
}

bool is_conservative(const Operation& f) {
  for (std::size_t idx = 0; idx < f.table_size(); ++idx) {
    auto t = index_tuple(f.size(), f.arity(), idx);
    if (std::find(t.begin(), t.end(), f.code_at(idx) + 1) == t.end()) return false;
  }
  return true;
}

bool is_boolean_minority(const Operation& f) {
  require_ternary(f, "is_boolean_minority");
  if (!std::has_single_bit(static_cast<unsigned>(f.size())))
    throw AlgebraError("is_boolean_minority requires a base set whose size is a power of 2");
  // A labelling lambda: A -> GF(2)^m; f must equal lambda^-1(lambda x ^ lambda y ^ lambda z).
  const int k = f.size();
  std::vector<int> label(static_cast<std::size_t>(k));
  std::iota(label.begin(), label.end(), 0);
  do {
    std::vector<int> element_of(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) element_of[static_cast<std::size_t>(label[static_cast<std::size_t>(a)])] = a;
    bool ok = true;
    for (std::size_t idx = 0; ok && idx < f.table_size(); ++idx) {
      const auto x = idx / static_cast<std::size_t>(k * k);
      const auto y = (idx / static_cast<std::size_t>(k)) % static_cast<std::size_t>(k);
      const auto z = idx % static_cast<std::size_t>(k);
      const int sum = label[x] ^ label[y] ^ label[z];
      if (f.code_at(idx) != element_of[static_cast<std::size_t>(sum)]) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(label.begin(), label.end()));
  return false;
}

// ---------------------------------------------------------------------------

Subset::Subset(int size, std::initializer_list<int> members)
    : Subset(size, std::span<const int>(members.begin(), members.size())) {}

Subset::Subset(int size, std::span<const int> members) : size_(size), mask_(0) {
  if (size < 1 || size > kMaxSize) throw AlgebraError("subset base size " + std::to_string(size) + " out of range");
  for (int m : members) {
    if (m < 1 || m > size) throw AlgebraError("subset member " + std::to_string(m) + " outside 1.." + std::to_string(size));
    mask_ |= 1U << (m - 1);
  }
  if (mask_ == 0) throw AlgebraError("subset must be nonempty");
}

Subset Subset::from_mask(int size, std::uint32_t mask) {
  if (size < 1 || size > kMaxSize) throw AlgebraError("subset base size out of range");
  if (mask == 0 || (mask >> size) != 0) throw AlgebraError("subset mask out of range");
  return Subset(size, mask, true);
}

Subset Subset::full(int size) { return from_mask(size, (1U << size) - 1); }

int Subset::count() const noexcept { return std::popcount(mask_); }

std::vector<int> Subset::members() const {
  std::vector<int> out;
  for (int a = 1; a <= size_; ++a)
    if (contains(a)) out.push_back(a);
  return out;
}

std::string Subset::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int a : members()) {
    if (!first) s += ',';
    s += std::to_string(a);
    first = false;
  }
  return s + "}";
}

std::strong_ordering operator<=>(const Subset& a, const Subset& b) {
  if (auto c = a.count() <=> b.count(); c != 0) return c;
  if (auto c = a.members() <=> b.members(); c != 0) return c;
  return a.size() <=> b.size();
}

CyclicClass::CyclicClass(int a, int b, int c) {
  if (a == b || b == c || a == c) throw AlgebraError("cyclic class needs pairwise-distinct elements");
  std::array<std::array<int, 3>, 3> rot{{{a, b, c}, {b, c, a}, {c, a, b}}};
  rep_ = *std::min_element(rot.begin(), rot.end());
}

std::array<std::array<int, 3>, 3> CyclicClass::members() const noexcept {
  const auto [a, b, c] = rep_;
  return {{{a, b, c}, {b, c, a}, {c, a, b}}};
}

bool CyclicClass::contains(int a, int b, int c) const noexcept {
  for (const auto& t : members())
    if (t == std::array<int, 3>{a, b, c}) return true;
  return false;
}

std::string CyclicClass::to_string() const {
  return "<" + std::to_string(rep_[0]) + std::to_string(rep_[1]) + std::to_string(rep_[2]) + ">";
}

std::vector<CyclicClass> cyclic_classes(int size) {
  std::vector<CyclicClass> out;
  for (int a = 1; a <= size; ++a)
    for (int b = a + 1; b <= size; ++b)
      for (int c = a + 1; c <= size; ++c)
        if (c != b) out.emplace_back(a, b, c);
  std::sort(out.begin(), out.end());
  return out;
}

Operation restrict(const Operation& f, const Subset& subset) {
  if (subset.size() != f.size()) throw AlgebraError("subset and operation have different base sizes");
  const auto members = subset.members();
  const int m = static_cast<int>(members.size());
  if (m < 2) throw AlgebraError("restriction needs at least two elements");
  std::vector<int> position(static_cast<std::size_t>(f.size()) + 1, 0);
  for (int i = 0; i < m; ++i) position[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])] = i + 1;

  const std::size_t n = table_length(f.arity(), m);
  std::vector<int> table(n);
  std::vector<int> args(static_cast<std::size_t>(f.arity()));
  for (std::size_t idx = 0; idx < n; ++idx) {
    auto local = index_tuple(m, f.arity(), idx);
    for (std::size_t j = 0; j < args.size(); ++j) args[j] = members[static_cast<std::size_t>(local[j] - 1)];
    const int v = f(args);
    if (!subset.contains(v))
      throw AlgebraError("subset " + subset.to_string() + " is not closed: f" + tuple_string(args) + "=" +
                         std::to_string(v) + " ∉ " + subset.to_string());
    table[idx] = position[static_cast<std::size_t>(v)];
  }
  return make_operation(f.arity(), m, table);
}

Subset range_of(const Operation& f) {
  require_ternary(f, "range_of");
  std::uint32_t mask = 0;
  const int k = f.size();
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b)
      for (int c = 1; c <= k; ++c)
        if (a != b && b != c && a != c) mask |= 1U << (f({a, b, c}) - 1);
  return Subset::from_mask(k, mask);
}

// ---------------------------------------------------------------------------

Bijection identity_bijection(int size) {
  Bijection phi(static_cast<std::size_t>(size));
  std::iota(phi.begin(), phi.end(), 1);
  return phi;
}

Bijection inverse(const Bijection& phi) {
  Bijection inv(phi.size());
  for (std::size_t a = 0; a < phi.size(); ++a) inv[static_cast<std::size_t>(phi[a] - 1)] = static_cast<int>(a) + 1;
  return inv;
}

std::vector<Bijection> all_bijections(int size) {
  std::vector<Bijection> out;
  auto phi = identity_bijection(size);
  do out.push_back(phi);
  while (std::next_permutation(phi.begin(), phi.end()));
  return out;
}

Operation conjugate(const Operation& f, const Bijection& phi) {
  if (static_cast<int>(phi.size()) != f.size()) throw AlgebraError("bijection size does not match operation");
  const auto k = static_cast<std::size_t>(f.size());
  // g(phi(x)) = phi(f(x)): walk the source tuples and write the image index.
  std::vector<Code> codes(f.table_size());
  for (std::size_t idx = 0; idx < f.table_size(); ++idx) {
    std::size_t rest = idx, image = 0, weight = 1;
    for (int j = 0; j < f.arity(); ++j) {
      image += static_cast<std::size_t>(phi[rest % k] - 1) * weight;
      rest /= k;
      weight *= k;
    }
    codes[image] = static_cast<Code>(phi[f.code_at(idx)] - 1);
  }
  return Operation::from_codes(f.arity(), f.size(), std::move(codes));
}

std::optional<Bijection> find_isomorphism(const Operation& f, const Operation& g) {
  if (f.arity() != g.arity() || f.size() != g.size())
    throw AlgebraError("isomorphism test needs operations of equal arity and size");
  for (const auto& phi : all_bijections(f.size()))
    if (conjugate(f, phi) == g) return phi;
  return std::nullopt;
}

CanonicalForm canonicalize(const Operation& f) {
  std::optional<CanonicalForm> best;
  for (const auto& phi : all_bijections(f.size())) {
    auto g = conjugate(f, phi);
    if (!best || std::lexicographical_compare(g.codes().begin(), g.codes().end(), best->form.codes().begin(),
                                              best->form.codes().end()))
      best = CanonicalForm{std::move(g), phi};
  }
  return *best;
}

Operation canonical_form(const Operation& f) { return canonicalize(f).form; }

std::string to_string(const Bijection& phi) {
  std::ostringstream os;
  os << '{';
  for (std::size_t a = 0; a < phi.size(); ++a) os << (a ? "," : "") << a + 1 << "->" << phi[a];
  os << '}';
  return os.str();
}

}  // namespace cloneforge
