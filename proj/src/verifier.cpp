#include "cloneforge/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "cloneforge/catalog.hpp"
#include "cloneforge/error.hpp"
#include "cloneforge/operation_io.hpp"
#include "cloneforge/relation.hpp"
#include "cloneforge/term.hpp"

namespace cloneforge {

using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kClaimSeed = 42;
constexpr std::uint64_t kStarSeed = 7;
constexpr int kClaimSamples = 200;
constexpr int kStarSamples = 500;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Values on the pairwise-distinct triples, in table order, as one string.
std::string distinct_values(const Operation& f) {
  std::string out;
  const int k = f.size();
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b)
      for (int c = 1; c <= k; ++c)
        if (a != b && b != c && a != c) out += static_cast<char>('0' + f({a, b, c}));
  return out;
}

std::vector<Operation> sorted(std::vector<Operation> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Operation> conjugate_all(const std::vector<Operation>& ops, const Bijection& phi) {
  std::vector<Operation> out;
  out.reserve(ops.size());
  for (const auto& g : ops) out.push_back(conjugate(g, phi));
  return sorted(std::move(out));
}

/// A bijection carrying the set `from` onto the set `to`, if any.
std::optional<Bijection> set_isomorphism(const std::vector<Operation>& from, const std::vector<Operation>& to) {
  if (from.empty() || from.size() != to.size()) return std::nullopt;
  const auto target = sorted(to);
  for (const auto& phi : all_bijections(from.front().size()))
    if (conjugate_all(from, phi) == target) return phi;
  return std::nullopt;
}

/// f with its arguments permuted: (x,y,z) -> f(v[s0], v[s1], v[s2]) where v = (x,y,z).
Operation permute_arguments(const Operation& f, const std::array<int, 3>& s) {
  const int k = f.size();
  return compose(f, {projection(3, s[0], k), projection(3, s[1], k), projection(3, s[2], k)});
}

std::string argument_label(const std::string& name, const std::array<int, 3>& s) {
  if (s == std::array<int, 3>{1, 2, 3}) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < 3; ++i) out += std::string(i ? "," : "") + "xyz"[s[i] - 1];
  return out + ")";
}

/// Forms of M1 and M3 in S: the tables themselves and any argument
/// permutation that stays in S, keyed by canonical form.
std::map<Operation, std::string> s_forms_of_generators() {
  std::map<Operation, std::string> out;
  for (int i : {1, 3}) {
    std::array<int, 3> s{1, 2, 3};
    do {
      const Operation g = permute_arguments(M_table(i), s);
      if (in_S(g)) out.emplace(canonical_form(g), argument_label("M" + std::to_string(i), s));
    } while (std::next_permutation(s.begin(), s.end()));
  }
  return out;
}

Operation three_element_candidate(int code) {
  return majority_from(3, [&code](int, int, int) {
    const int v = code % 3 + 1;
    code /= 3;
    return v;
  });
}

template <typename Fn>
Report timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  Report r = fn();
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index) : state_(mix64(seed ^ mix64(index))) {}

std::uint64_t SampleRng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

std::uint64_t SampleRng::below(std::uint64_t n) {
  if (n == 0) throw AlgebraError("SampleRng::below needs n > 0");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

Operation random_majority(int size, SampleRng& rng) {
  return majority_from(size, [&](int, int, int) { return static_cast<int>(rng.below(static_cast<std::uint64_t>(size))) + 1; });
}

// ---------------------------------------------------------------------------

BracketSpec BracketSpec::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto bad = [&] { return AlgebraError("malformed bracket class '" + std::string(text) + "'"); };
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw bad();
  BracketSpec spec;
  std::size_t pos = 1;
  for (std::size_t i = 0; i < 6; ++i) {
    if (pos >= s.size() - 1) throw bad();
    const char c = s[pos++];
    if (c == '*') spec.values[i] = std::nullopt;
    else if (c >= '1' && c <= '4') spec.values[i] = c - '0';
    else throw bad();
    const char sep = s[pos++];
    if (i == 5 ? sep != ']' : sep != (i == 2 ? ';' : ',')) throw bad();
  }
  if (pos != s.size()) throw bad();
  return spec;
}

std::string BracketSpec::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < 6; ++i) {
    if (i) out += i == 3 ? ';' : ',';
    out += values[i] ? std::to_string(*values[i]) : "*";
  }
  return out + "]";
}

bool BracketSpec::matches(const Operation& f) const {
  if (f.arity() != 3 || f.size() < 3) return false;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& t = kBracketTriples[i];
    if (values[i] && f({t[0], t[1], t[2]}) != *values[i]) return false;
  }
  return true;
}

StarSampler::StarSampler(const BracketSpec& spec) : spec_(spec) {
  for (const auto& cls : cyclic_classes(4)) rotations_.push_back(cls.members());
  int fixed = 0;
  for (const auto& v : spec.values) fixed += v.has_value();
  for (int i = 0; i < 24 - fixed; ++i) all_ *= 4;
  for (std::uint32_t p = 0; p < 256; ++p) {
    std::uint64_t w = 1;
    for (std::size_t cls = 0; cls < rotations_.size() && w; ++cls) w *= options(cls, p).size();
    weight_[p] = w;
    total_ += w;
  }
}

bool StarSampler::allowed(std::size_t cls, const std::array<int, 3>& values) const {
  for (std::size_t q = 0; q < 3; ++q)
    for (std::size_t i = 0; i < 6; ++i)
      if (rotations_[cls][q] == kBracketTriples[i] && spec_.values[i] && *spec_.values[i] != values[q]) return false;
  return true;
}

std::vector<StarSampler::Choice> StarSampler::options(std::size_t cls, std::uint32_t p_classes) const {
  std::vector<Choice> out;
  if ((p_classes >> cls) & 1U) {
    const auto& r = rotations_[cls];
    const std::array<int, 3> first{r[0][0], r[1][0], r[2][0]};
    if (allowed(cls, first)) out.push_back({first});
    return out;
  }
  for (int u = 1; u <= 4; ++u)
    if (allowed(cls, {u, u, u})) out.push_back({{u, u, u}});
  for (std::size_t d = 0; d < rotations_.size(); ++d) {
    if (d == cls || !((p_classes >> d) & 1U)) continue;
    for (const auto& t : rotations_[d])
      if (allowed(cls, t)) out.push_back({t});
  }
  return out;
}

Operation StarSampler::sample(SampleRng& rng) const {
  if (total_ == 0) throw PreconditionError("bracket class has no completion satisfying the star identity");
  std::uint64_t r = rng.below(total_);
  std::uint32_t p = 0;
  while (r >= weight_[p]) r -= weight_[p++];
  std::map<std::array<int, 3>, int> value;
  for (std::size_t cls = 0; cls < rotations_.size(); ++cls) {
    const auto opts = options(cls, p);
    const auto& choice = opts[rng.below(opts.size())];
    for (std::size_t q = 0; q < 3; ++q) value[rotations_[cls][q]] = choice.values[q];
  }
  return majority_from(4, [&](int a, int b, int c) { return value.at({a, b, c}); });
}

// ---------------------------------------------------------------------------

std::string ClassPattern::to_string() const {
  switch (kind) {
    case Kind::Const: return "=" + std::to_string(value);
    case Kind::P: return "p";
    case Kind::Mixed: return "mixed";
  }
  return "mixed";
}

std::vector<ClassPattern> class_profile(const Operation& f) {
  if (f.arity() != 3) throw AlgebraError("class_profile needs a ternary operation");
  std::vector<ClassPattern> out;
  for (const auto& cls : cyclic_classes(f.size())) {
    const auto r = cls.members();
    const int u = f({r[0][0], r[0][1], r[0][2]}), v = f({r[1][0], r[1][1], r[1][2]}), w = f({r[2][0], r[2][1], r[2][2]});
    ClassPattern p;
    if (u == v && v == w) p = {ClassPattern::Kind::Const, u};
    else if (u == r[0][0] && v == r[1][0] && w == r[2][0]) p = {ClassPattern::Kind::P, 0};
    out.push_back(p);
  }
  return out;
}

bool in_S(const Operation& f) {
  if (f.arity() != 3 || f.size() != 4 || !is_majority(f)) return false;
  const auto profile = class_profile(f);
  return std::none_of(profile.begin(), profile.end(),
                      [](const ClassPattern& p) { return p.kind == ClassPattern::Kind::Mixed; });
}

Operation S_candidate(std::uint64_t index) {
  if (index >= kSCandidates) throw AlgebraError("S candidate index out of range");
  static const auto classes = cyclic_classes(4);
  std::array<int, 8> digit{};
  for (auto& d : digit) {
    d = static_cast<int>(index % 5);
    index /= 5;
  }
  return majority_from(4, [&](int a, int b, int c) {
    for (std::size_t j = 0; j < classes.size(); ++j)
      if (classes[j].contains(a, b, c)) return digit[j] == 4 ? a : digit[j] + 1;
    return 0;
  });
}

void enumerate_S(const std::function<void(std::uint64_t, const Operation&)>& visit) {
  for (std::uint64_t i = 0; i < kSCandidates; ++i) visit(i, S_candidate(i));
}

// ---------------------------------------------------------------------------

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

MinimalityVerdict decide_minimality(const Operation& f, std::size_t cap, FragmentCache* cache) {
  MinimalityVerdict v = is_minimal_majority(f, cap, cache);
  for (int round = 0; round < 2 && v.kind == MinimalityVerdict::Kind::Inconclusive; ++round) {
    cap *= 10;
    v = is_minimal_majority(f, cap, cache);
  }
  return v;
}

bool definition_minimal(const Operation& f, std::size_t cap) {
  bool minimal = true;
  MemberVisitor visit = [&](const CloneFragment& fragment, std::size_t index) {
    if (index <= 3) return true;  // projections and f itself
    minimal = generates(fragment.member(index), f, cap);
    return minimal;
  };
  const auto fragment = ternary_closure(f, cap, visit);
  if (minimal && !fragment.closed()) throw CapExceeded("closure exceeded cap " + std::to_string(cap));
  return minimal;
}

// ---------------------------------------------------------------------------

Report sweep_three_element(const VerifyOptions& options) {
  Report report;
  report.check = "three-element";
  struct Result {
    ThreeElementClass cls;
    bool oracle = false;
    std::vector<Operation> members;
  };
  std::vector<Result> results(729);
  FragmentCache cache;
  parallel_for(729, options.threads, [&](std::size_t code) {
    const Operation f = three_element_candidate(static_cast<int>(code));
    auto& r = results[code];
    r.cls = classify_three_element(f, options.cap, &cache);
    r.oracle = definition_minimal(f, options.cap);
    if (r.cls.minimal()) r.members = majority_members(f, options.cap);
  });

  std::int64_t minimal = 0, agree = 0, inconclusive = 0;
  std::array<std::int64_t, 4> ops_by_type{};
  std::map<std::vector<Operation>, int> clones;
  for (std::size_t code = 0; code < results.size(); ++code) {
    const auto& r = results[code];
    const Operation f = three_element_candidate(static_cast<int>(code));
    if (r.cls.verdict.kind == MinimalityVerdict::Kind::Inconclusive) ++inconclusive;
    if (r.oracle == r.cls.minimal()) ++agree;
    else report.fail({{"operation", distinct_values(f)}, {"engine", verdict_name(r.cls.verdict.kind)}, {"oracle_minimal", r.oracle}});
    if (!r.cls.minimal()) continue;
    ++minimal;
    if (!r.cls.classified()) {
      report.fail({{"operation", distinct_values(f)}, {"reason", "minimal but matches no m_i"},
                   {"majority_members", r.cls.majority_members}});
      continue;
    }
    ++ops_by_type[static_cast<std::size_t>(r.cls.type)];
    clones.emplace(r.members, r.cls.type);
  }

  std::array<std::int64_t, 4> clones_by_type{};
  for (const auto& [members, type] : clones) {
    ++clones_by_type[static_cast<std::size_t>(type)];
    const std::size_t expected = type == 1 ? 1 : type == 2 ? 3 : 8;
    if (members.size() != expected)
      report.fail({{"clone", distinct_values(members.front())}, {"reason", "member count"}, {"members", members.size()}});
    const std::string name = "m" + std::to_string(type);
    if (!set_isomorphism(members, printed_members(name)))
      report.fail({{"clone", distinct_values(members.front())}, {"reason", "members differ from the printed " + name + " block up to isomorphism"}});
  }

  report.counters["candidates"] = results.size();
  report.counters["minimal"] = minimal;
  report.counters["not_minimal"] = static_cast<std::int64_t>(results.size()) - minimal - inconclusive;
  report.counters["inconclusive"] = inconclusive;
  report.counters["oracle_agreement"] = agree;
  report.counters["minimal_by_type"] = {{"m1", ops_by_type[1]}, {"m2", ops_by_type[2]}, {"m3", ops_by_type[3]}};
  report.counters["minimal_clones"] = clones.size();
  report.counters["clones_by_type"] = {{"m1", clones_by_type[1]}, {"m2", clones_by_type[2]}, {"m3", clones_by_type[3]}};
  report.expected = {{"candidates", 729}, {"oracle_agreement", 729}, {"clone_sizes", {1, 3, 8}}};
  if (inconclusive) report.fail({{"reason", "inconclusive verdicts"}, {"count", inconclusive}});
  return report;
}

Report reproduce_tables(const VerifyOptions& options) {
  Report report;
  report.check = "tables";
  ordered_json expected = ordered_json::object(), actual = ordered_json::object();
  for (auto name : kTableNames) {
    const std::string n(name);
    const Operation f = *named_table(name);
    const auto printed = sorted(printed_members(name));
    const auto computed = majority_members(f, options.cap);
    expected[n] = printed.size();
    actual[n] = computed.size();
    report.counters[n] = computed.size();
    if (printed_members(name).front() != f)
      report.fail({{"table", n}, {"reason", "first printed column differs from the generator"}});
    if (computed == printed) continue;
    ordered_json missing = ordered_json::array(), extra = ordered_json::array();
    for (const auto& g : printed)
      if (!std::binary_search(computed.begin(), computed.end(), g)) missing.push_back(distinct_values(g));
    for (const auto& g : computed)
      if (!std::binary_search(printed.begin(), printed.end(), g)) extra.push_back(distinct_values(g));
    report.fail({{"table", n}, {"missing", missing}, {"extra", extra}});
  }
  report.expected = {{"m1", 1}, {"m2", 3}, {"m3", 8}, {"M1", 1}, {"M2", 3}, {"M3", 8}};
  report.actual = actual;
  if (actual != report.expected) report.fail({{"reason", "member counts"}});
  return report;
}

Report verify_generators_minimal(const VerifyOptions& options) {
  Report report;
  report.check = "minimality";
  const std::array<std::size_t, 3> sizes{4, 6, 11};
  for (int i = 1; i <= 3; ++i) {
    const std::string name = "M" + std::to_string(i);
    const Operation f = M_table(i);
    const auto v = is_minimal_majority(f, options.cap);
    const auto fragment = ternary_closure(f, options.cap);
    report.counters[name] = {{"verdict", verdict_name(v.kind)}, {"fragment_size", fragment.size()}};
    if (!v.minimal() || fragment.size() != sizes[static_cast<std::size_t>(i - 1)] || !fragment.closed())
      report.fail({{"operation", name}, {"verdict", verdict_name(v.kind)}, {"fragment_size", fragment.size()},
                   {"detail", v.detail}});
  }
  report.expected = {{"M1", 4}, {"M2", 6}, {"M3", 11}};
  return report;
}

Report classify_S(const VerifyOptions& options) {
  Report report;
  report.check = "s-classify";
  struct Entry {
    PackedTable canonical;
    bool star = false;
    bool profile = false;
  };
  std::vector<Entry> entries(kSCandidates);
  constexpr std::size_t kBlock = 4096;
  parallel_for((kSCandidates + kBlock - 1) / kBlock, options.threads, [&](std::size_t block) {
    const std::uint64_t end = std::min<std::uint64_t>(kSCandidates, (block + 1) * kBlock);
    for (std::uint64_t i = block * kBlock; i < end; ++i) {
      const Operation f = S_candidate(i);
      entries[i] = {pack(to_ternary_table(canonical_form(f))), satisfies_star(f), in_S(f)};
    }
  });

  std::int64_t star = 0, profile = 0;
  std::map<PackedTable, std::int64_t> multiplicity;
  for (const auto& e : entries) {
    star += e.star;
    profile += e.profile;
    ++multiplicity[e.canonical];
  }
  if (star != static_cast<std::int64_t>(kSCandidates)) report.fail({{"reason", "candidates violating the star identity"}, {"count", kSCandidates - star}});
  if (profile != static_cast<std::int64_t>(kSCandidates)) report.fail({{"reason", "candidates with a mixed class"}, {"count", kSCandidates - profile}});

  std::vector<std::pair<PackedTable, std::int64_t>> classes(multiplicity.begin(), multiplicity.end());
  std::vector<MinimalityVerdict> verdicts(classes.size());
  FragmentCache cache;
  parallel_for(classes.size(), options.threads, [&](std::size_t i) {
    verdicts[i] = decide_minimality(from_ternary_table(unpack(classes[i].first), 4), options.cap, &cache);
  });

  const auto forms = s_forms_of_generators();
  std::map<std::string, std::int64_t> by_form;
  std::int64_t minimal_classes = 0, minimal_members = 0, cons_classes = 0, cons_members = 0, noncons_classes = 0,
               noncons_members = 0, inconclusive = 0;
  std::map<std::string, std::int64_t> reasons;
  std::set<std::string> noncons_types;
  std::set<PackedTable> minimal_keys;
  std::map<Operation, bool> three_element;  // restriction -> minimal
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Operation f = from_ternary_table(unpack(classes[i].first), 4);
    const auto& v = verdicts[i];
    const std::int64_t count = classes[i].second;
    if (v.kind == MinimalityVerdict::Kind::Inconclusive) {
      ++inconclusive;
      report.fail({{"operation", distinct_values(f)}, {"reason", "inconclusive after cap escalation"}});
      continue;
    }
    if (v.kind == MinimalityVerdict::Kind::NotMinimal) {
      ++reasons[std::string(reason_name(v.reason))];
      continue;
    }
    ++minimal_classes;
    minimal_members += count;
    minimal_keys.insert(classes[i].first);
    if (is_conservative(f)) {
      ++cons_classes;
      cons_members += count;
      for (const auto& [subset, component] : conservative_spec(f)) {
        auto it = three_element.find(component);
        if (it == three_element.end())
          it = three_element.emplace(component, decide_minimality(component, options.cap).minimal()).first;
        if (!it->second)
          report.fail({{"operation", distinct_values(f)}, {"reason", "restriction is not minimal"}, {"subset", subset.to_string()}});
      }
    } else {
      ++noncons_classes;
      noncons_members += count;
      // Permuting arguments keeps the clone, so M3(x,z,y) counts as M3.
      if (const auto it = forms.find(f); it != forms.end()) {
        noncons_types.insert(it->second.substr(0, 2));
        by_form[it->second] += count;
      } else {
        report.fail({{"operation", distinct_values(f)},
                     {"reason", "minimal, not conservative, and not a form of M1 or M3"}});
      }
    }
  }

  // Every isomorphic copy of each form is a candidate and lands in a minimal class.
  std::set<Operation> copies;
  for (const auto& [form, label] : forms)
    for (const auto& phi : all_bijections(4)) copies.insert(conjugate(form, phi));
  for (const auto& g : copies)
    if (!in_S(g) || !minimal_keys.contains(pack(to_ternary_table(canonical_form(g)))))
      report.fail({{"operation", distinct_values(g)}, {"reason", "copy of " + forms.at(canonical_form(g)) + " not found minimal in S"}});
  if (static_cast<std::int64_t>(copies.size()) != noncons_members)
    report.fail({{"reason", "nonconservative minimal members are not exactly the copies of M1 and M3"},
                 {"copies", copies.size()}, {"found", noncons_members}});

  report.counters["candidates"] = kSCandidates;
  report.counters["star_identity"] = star;
  report.counters["canonical_classes"] = classes.size();
  report.counters["minimal_classes"] = minimal_classes;
  report.counters["minimal_members"] = minimal_members;
  report.counters["conservative_minimal_classes"] = cons_classes;
  report.counters["conservative_minimal_members"] = cons_members;
  report.counters["nonconservative_minimal_classes"] = noncons_classes;
  report.counters["nonconservative_minimal_members"] = noncons_members;
  report.counters["nonconservative_types"] = noncons_types;
  report.counters["nonconservative_members_by_form"] = by_form;
  report.counters["not_minimal_classes_by_reason"] = reasons;
  report.counters["inconclusive"] = inconclusive;
  report.expected = {{"candidates", kSCandidates}, {"nonconservative_types", {"M1", "M3"}}, {"inconclusive", 0}};
  report.actual = {{"candidates", kSCandidates}, {"nonconservative_types", noncons_types}, {"inconclusive", inconclusive}};
  if (noncons_types != std::set<std::string>{"M1", "M3"}) report.fail({{"reason", "nonconservative types"}});
  return report;
}

Report restriction_correspondence(const VerifyOptions& options) {
  Report report;
  report.check = "restriction";
  const Subset b(4, {2, 3, 4});
  for (int i = 1; i <= 3; ++i) {
    const std::string name = "M" + std::to_string(i);
    const auto members = majority_members(M_table(i), options.cap);
    std::vector<Operation> restricted;
    for (const auto& g : members) restricted.push_back(restrict(g, b));
    const auto distinct = sorted(restricted);
    const bool injective = std::adjacent_find(distinct.begin(), distinct.end()) == distinct.end();
    const auto target = majority_members(m_table(i), options.cap);
    const auto phi = set_isomorphism(restricted, target);
    ordered_json entry{{"members", members.size()}, {"injective", injective}};
    if (phi) {
      // Restrictions are indexed 1..3 for the elements 2..4.
      std::string text;
      for (int a = 0; a < 3; ++a) text += (a ? "," : "") + std::to_string(a + 2) + "->" + std::to_string((*phi)[static_cast<std::size_t>(a)]);
      entry["bijection"] = text;
    } else {
      entry["bijection"] = nullptr;
    }
    report.counters[name] = entry;
    if (!injective) report.fail({{"operation", name}, {"reason", "restriction to {2,3,4} is not injective"}});
    if (!phi) report.fail({{"operation", name}, {"reason", "no bijection onto the members of m" + std::to_string(i)}});
  }
  return report;
}

Report verify_star_properties(const VerifyOptions& options) {
  Report report;
  report.check = "star-properties";
  const std::uint64_t seed = options.seed.value_or(kStarSeed);
  const int samples = options.samples.value_or(kStarSamples);
  if (samples < 1) throw AlgebraError("samples must be positive");
  report.seed = seed;
  struct Result {
    int size = 0;
    bool star = false;
    std::vector<std::string> failures;
  };
  std::vector<Result> results(static_cast<std::size_t>(samples));
  parallel_for(results.size(), options.threads, [&](std::size_t i) {
    SampleRng rng(seed, i);
    auto& r = results[i];
    r.size = i % 2 == 0 ? 3 : 4;
    const Operation f = random_majority(r.size, rng);
    std::array<std::optional<Operation>, 9> iter;
    iter[1] = f;
    for (int k = 2; k <= 8; ++k) iter[static_cast<std::size_t>(k)] = star_compose(f, *iter[static_cast<std::size_t>(k - 1)]);
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l)
        if (star_compose(*iter[static_cast<std::size_t>(k)], *iter[static_cast<std::size_t>(l)]) != *iter[static_cast<std::size_t>(k + l)])
          r.failures.push_back("homomorphism fails for k=" + std::to_string(k) + ", l=" + std::to_string(l));
    const auto cycle = star_cycle(f);
    const Operation h = hat(f);
    if (!is_majority(h)) r.failures.push_back("hat is not majority");
    if (!satisfies_star(h)) r.failures.push_back("hat does not satisfy the star identity");
    if (eval_term(star_term(cycle.exponent), f) != h) r.failures.push_back("hat differs from its term f^(k)");
    if (r.size == 3 && !generates(f, h, options.cap)) r.failures.push_back("hat is not in the closure of f");
    r.star = satisfies_star(f);
    if (r.star && !check_lemma_2_3(f)) r.failures.push_back("star-identity sample violates the u,v,w lemma");
    if (!check_lemma_2_3(h)) r.failures.push_back("hat violates the u,v,w lemma");
  });
  std::int64_t star = 0, closure_checked = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    star += results[i].star;
    closure_checked += results[i].size == 3;
    for (const auto& f : results[i].failures) report.fail({{"sample", i}, {"failure", f}});
  }
  report.counters["samples"] = samples;
  report.counters["size3"] = (samples + 1) / 2;
  report.counters["size4"] = samples / 2;
  report.counters["homomorphism_pairs"] = static_cast<std::int64_t>(samples) * 16;
  report.counters["star_samples"] = star;
  report.counters["lemma_checks"] = samples + star;
  report.counters["closure_membership_checks"] = closure_checked;
  report.counters["term_membership_checks"] = samples;
  report.counters["failures"] = report.failures.size();
  return report;
}

Report verify_roundtrip(const VerifyOptions&) {
  Report report;
  report.check = "roundtrip";
  std::int64_t cases = 0;
  for (auto name : kTableNames) {
    const Operation f = *named_table(name);
    for (auto format : {TextFormat::Full, TextFormat::Majority}) {
      ++cases;
      const std::string first = serialize(f, format);
      const Operation parsed = parse_operation(first);
      const std::string second = serialize(parsed, format);
      if (parsed != f || first != second)
        report.fail({{"table", name}, {"format", format_name(format)}});
    }
  }
  report.counters["cases"] = cases;
  report.expected = {{"cases", 12}};
  return report;
}

Report verify_conservative(const VerifyOptions& options) {
  Report report;
  report.check = "conservative";
  std::vector<Operation> minimal3;
  for (int code = 0; code < 729; ++code) {
    const Operation f = three_element_candidate(code);
    if (decide_minimality(f, options.cap).minimal()) minimal3.push_back(f);
  }
  std::vector<Subset> subsets;
  for (std::uint32_t mask = 0; mask < 16; ++mask)
    if (std::popcount(mask) == 3) subsets.push_back(Subset::from_mask(4, mask));
  const std::size_t n = minimal3.size();
  const std::size_t candidates = n * n * n * n;
  std::vector<PackedTable> canonical(candidates);
  parallel_for(n, options.threads, [&](std::size_t first) {
    for (std::size_t rest = 0; rest < n * n * n; ++rest) {
      ConservativeSpec spec;
      const std::array<std::size_t, 4> pick{first, rest / (n * n), (rest / n) % n, rest % n};
      for (std::size_t s = 0; s < 4; ++s) spec.emplace(subsets[s], minimal3[pick[s]]);
      canonical[first * n * n * n + rest] = pack(to_ternary_table(canonical_form(glue_conservative(spec))));
    }
  });
  std::map<PackedTable, std::int64_t> multiplicity;
  for (const auto& c : canonical) ++multiplicity[c];
  std::vector<std::pair<PackedTable, std::int64_t>> classes(multiplicity.begin(), multiplicity.end());
  std::vector<MinimalityVerdict> verdicts(classes.size());
  FragmentCache cache;
  parallel_for(classes.size(), options.threads, [&](std::size_t i) {
    verdicts[i] = decide_minimality(from_ternary_table(unpack(classes[i].first), 4), options.cap, &cache);
  });
  std::int64_t minimal_classes = 0, minimal_members = 0, inconclusive = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (verdicts[i].kind == MinimalityVerdict::Kind::Inconclusive) {
      ++inconclusive;
      report.fail({{"operation", distinct_values(from_ternary_table(unpack(classes[i].first), 4))}, {"reason", "inconclusive"}});
    }
    if (!verdicts[i].minimal()) continue;
    ++minimal_classes;
    minimal_members += classes[i].second;
  }
  // A nonconservative minimal majority operation lies in a copy of some [M_i],
  // and every majority member there is minimal as well.
  std::set<Operation> nonconservative;
  for (int i = 1; i <= 3; ++i)
    for (const auto& g : majority_members(M_table(i), options.cap))
      for (const auto& phi : all_bijections(4)) nonconservative.insert(conjugate(g, phi));
  const auto copies = static_cast<std::int64_t>(nonconservative.size());
  report.counters["minimal_three_element"] = n;
  report.counters["glued_candidates"] = candidates;
  report.counters["canonical_classes"] = classes.size();
  report.counters["conservative_minimal_classes"] = minimal_classes;
  report.counters["conservative_minimal_members"] = minimal_members;
  report.counters["nonconservative_minimal_members"] = copies;
  report.counters["minimal_majority_operations"] = minimal_members + copies;
  report.counters["inconclusive"] = inconclusive;
  return report;
}

// ---------------------------------------------------------------------------

const std::vector<ClaimCheck>& claim_checks() {
  static const std::vector<ClaimCheck> checks{
      {"3.3.1", BracketSpec::parse("[4,2,1;*,*,*]"), false},
      {"3.3.2", BracketSpec::parse("[4,1,2;*,*,*]"), false},
      {"3.3.3", BracketSpec::parse("[4,1,3;*,*,*]"), false},
      {"3.3.4", BracketSpec::parse("[4,3,1;*,*,*]"), false},
      {"3.4", BracketSpec::parse("[4,3,2;*,*,*]"), false},
      {"3.5a", BracketSpec::parse("[4,2,3;2,1,4]"), false},
      {"3.5b", BracketSpec::parse("[4,2,3;4,1,3]"), false},
      {"3.7", BracketSpec::parse("[4,2,3;4,4,4]"), false},
      {"3.6-companion", BracketSpec::parse("[4,2,3;2,4,3]"), true},
  };
  return checks;
}

Report spot_check_claim(const ClaimCheck& claim, const VerifyOptions& options) {
  Report report;
  report.check = "claim " + claim.id;
  const std::uint64_t seed = options.seed.value_or(kClaimSeed);
  const int samples = options.samples.value_or(kClaimSamples);
  if (samples < 1) throw AlgebraError("samples must be positive");
  report.seed = seed;
  const StarSampler sampler(claim.bracket);
  report.counters["bracket"] = claim.bracket.to_string();
  report.counters["completions"] = sampler.completions();
  report.counters["star_completions"] = sampler.star_completions();
  if (sampler.star_completions() == 0) {
    report.status = Status::NoSamples;
    report.counters["note"] = "no star-identity sample found";
    return report;
  }
  // Each claim draws from its own streams, keyed by its position in the list.
  std::uint64_t ordinal = 0;
  for (const auto& c : claim_checks()) {
    if (c.id == claim.id) break;
    ++ordinal;
  }
  struct Result {
    Operation f = projection(3, 1, 4);
    MinimalityVerdict verdict;
    bool in_class = false, star = false;
  };
  std::vector<Result> results(static_cast<std::size_t>(samples));
  FragmentCache cache;
  parallel_for(results.size(), options.threads, [&](std::size_t i) {
    SampleRng rng(seed, (ordinal << 32) | i);
    auto& r = results[i];
    r.f = sampler.sample(rng);
    r.in_class = claim.bracket.matches(r.f) && is_majority(r.f);
    r.star = satisfies_star(r.f);
    r.verdict = decide_minimality(r.f, options.cap, &cache);
  });
  std::int64_t not_minimal = 0, minimal = 0, inconclusive = 0, equal_m2 = 0;
  const Operation m2 = M_table(2);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (!r.in_class || !r.star) report.fail({{"sample", i}, {"operation", distinct_values(r.f)}, {"reason", "sampler left the class"}});
    switch (r.verdict.kind) {
      case MinimalityVerdict::Kind::NotMinimal: ++not_minimal; break;
      case MinimalityVerdict::Kind::Inconclusive: ++inconclusive; break;
      case MinimalityVerdict::Kind::Minimal:
        ++minimal;
        if (claim.companion && r.f == m2) ++equal_m2;
        else report.fail({{"sample", i}, {"operation", distinct_values(r.f)}, {"reason", claim.companion ? "minimal but not M2" : "minimal sample"}});
        break;
    }
  }
  report.counters["drawn"] = samples;
  report.counters["kept"] = samples;
  report.counters["not_minimal"] = not_minimal;
  report.counters["minimal"] = minimal;
  if (claim.companion) {
    // The class is not empty of minimal operations: M2 itself lies in it.
    const bool m2_in_class = claim.bracket.matches(m2) && satisfies_star(m2) && decide_minimality(m2, options.cap).minimal();
    report.counters["minimal_equal_to_M2"] = equal_m2;
    report.counters["M2_in_class"] = m2_in_class;
    if (!m2_in_class) report.fail({{"operation", "M2"}, {"reason", "M2 is not a minimal member of this class"}});
  }
  report.counters["inconclusive"] = inconclusive;
  if (inconclusive && report.status == Status::Pass) report.status = Status::Inconclusive;
  return report;
}

Report spot_check_claims(const VerifyOptions& options) {
  Report report;
  report.check = "claims";
  report.seed = options.seed.value_or(kClaimSeed);
  std::vector<Report> parts;
  for (const auto& claim : claim_checks()) parts.push_back(spot_check_claim(claim, options));
  for (const auto& part : parts) {
    ordered_json c = part.counters;
    c["status"] = status_name(part.status);
    report.counters[part.check.substr(6)] = c;
    for (const auto& f : part.failures) {
      ordered_json entry = f;
      entry["claim"] = part.check.substr(6);
      report.failures.push_back(entry);
    }
  }
  report.status = combine(parts);
  return report;
}

// ---------------------------------------------------------------------------

Report run_check(std::string_view name, const VerifyOptions& options) {
  if (name == "tables") return timed([&] { return reproduce_tables(options); });
  if (name == "three-element") return timed([&] { return sweep_three_element(options); });
  if (name == "minimality") return timed([&] { return verify_generators_minimal(options); });
  if (name == "s-classify") return timed([&] { return classify_S(options); });
  if (name == "lemma31") return timed([&] { return verify_lemma_3_1(); });
  if (name == "star-properties") return timed([&] { return verify_star_properties(options); });
  if (name == "restriction") return timed([&] { return restriction_correspondence(options); });
  if (name == "claims") return timed([&] { return spot_check_claims(options); });
  if (name == "roundtrip") return timed([&] { return verify_roundtrip(options); });
  if (name == "conservative") return timed([&] { return verify_conservative(options); });
  throw AlgebraError("unknown check '" + std::string(name) + "'");
}

std::vector<Report> run_all(const VerifyOptions& options) {
  std::vector<Report> out;
  for (auto name : kVerifyTargets) out.push_back(run_check(name, options));
  return out;
}

}  // namespace cloneforge
