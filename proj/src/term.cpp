#include "cloneforge/term.hpp"

#include <cctype>
#include <map>
#include <unordered_map>
#include <vector>

#include "cloneforge/error.hpp"

namespace cloneforge {

struct Term::Node {
  int variable = 0;  // 1..3, or 0 for an application
  std::array<Term, 3> children;
};

Term Term::variable(int index) {
  if (index < 1 || index > 3) throw AlgebraError("term variable index must be 1, 2 or 3");
  // Variables are shared singletons.
  static const std::array<std::shared_ptr<const Node>, 3> vars = [] {
    std::array<std::shared_ptr<const Node>, 3> v;
    for (int i = 0; i < 3; ++i) {
      auto n = std::shared_ptr<Node>(new Node{i + 1, {Term(nullptr), Term(nullptr), Term(nullptr)}});
      v[static_cast<std::size_t>(i)] = n;
    }
    return v;
  }();
  return Term(vars[static_cast<std::size_t>(index - 1)]);
}

Term Term::apply(Term first, Term second, Term third) {
  return Term(std::shared_ptr<const Node>(new Node{0, {std::move(first), std::move(second), std::move(third)}}));
}

bool Term::is_variable() const noexcept { return node_->variable != 0; }
int Term::variable_index() const noexcept { return node_->variable; }

const Term& Term::child(int i) const {
  if (is_variable()) throw AlgebraError("a variable has no children");
  return node_->children.at(static_cast<std::size_t>(i));
}

Term Term::substitute(const std::array<Term, 3>& replacement) const {
  std::unordered_map<const Node*, Term> memo;
  auto go = [&](auto&& self, const Term& t) -> Term {
    if (t.is_variable()) return replacement[static_cast<std::size_t>(t.variable_index() - 1)];
    if (auto it = memo.find(t.node_.get()); it != memo.end()) return it->second;
    Term out = apply(self(self, t.child(0)), self(self, t.child(1)), self(self, t.child(2)));
    memo.emplace(t.node_.get(), out);
    return out;
  };
  return go(go, *this);
}

std::string Term::to_string() const {
  if (is_variable()) return std::string(1, "xyz"[variable_index() - 1]);
  return "f(" + child(0).to_string() + "," + child(1).to_string() + "," + child(2).to_string() + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_variable() || b.is_variable()) return a.variable_index() == b.variable_index();
  for (int i = 0; i < 3; ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  Term parse() {
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw AlgebraError("term syntax error at position " + std::to_string(pos_) + ": " + what);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  Term term() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_++];
    if (c == 'x') return Term::x();
    if (c == 'y') return Term::y();
    if (c == 'z') return Term::z();
    if (c != 'f') fail(std::string("unexpected '") + c + "'");
    expect('(');
    Term a = term();
    expect(',');
    Term b = term();
    expect(',');
    Term d = term();
    expect(')');
    return Term::apply(std::move(a), std::move(b), std::move(d));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void require_ternary(const Operation& f, const char* what) {
  if (f.arity() != 3) throw AlgebraError(std::string(what) + " requires a ternary operation");
}

}  // namespace

Term parse_term(std::string_view text) { return TermParser(text).parse(); }

Operation eval_term(const Term& t, const Operation& f) {
  require_ternary(f, "eval_term");
  const std::array<Operation, 3> proj{projection(3, 1, f.size()), projection(3, 2, f.size()),
                                      projection(3, 3, f.size())};
  std::unordered_map<const void*, Operation> memo;
  auto go = [&](auto&& self, const Term& s) -> Operation {
    if (s.is_variable()) return proj[static_cast<std::size_t>(s.variable_index() - 1)];
    if (auto it = memo.find(s.identity()); it != memo.end()) return it->second;
    Operation out = compose(f, {self(self, s.child(0)), self(self, s.child(1)), self(self, s.child(2))});
    memo.emplace(s.identity(), out);
    return out;
  };
  return go(go, t);
}

Term superposition_term(std::string_view name) {
  const Term x = Term::x(), y = Term::y(), z = Term::z();
  const Term f = Term::apply(x, y, z);
  if (name == "x") return Term::apply(f, y, z);
  if (name == "y") return Term::apply(x, f, z);
  if (name == "z") return Term::apply(x, y, f);
  if (name == "zy") {
    // (f_z)_y(x,y,z) = f_z(x, f_z(x,y,z), z)
    const Term fz = Term::apply(x, y, f);
    return fz.substitute({x, fz, z});
  }
  throw AlgebraError("unknown superposition '" + std::string(name) + "' (expected x, y, z or zy)");
}

Operation named_superposition(std::string_view name, const Operation& f) {
  return eval_term(superposition_term(name), f);
}

Operation star_compose(const Operation& g, const Operation& h) {
  require_ternary(g, "star_compose");
  require_ternary(h, "star_compose");
  if (g.size() != h.size()) throw AlgebraError("star_compose needs operations on the same base set");
  const auto k = static_cast<std::size_t>(g.size());
  std::vector<Code> codes(g.table_size());
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      for (std::size_t z = 0; z < k; ++z) {
        const std::size_t u = h.code_at((x * k + y) * k + z);
        const std::size_t v = h.code_at((y * k + z) * k + x);
        const std::size_t w = h.code_at((z * k + x) * k + y);
        codes[(x * k + y) * k + z] = g.code_at((u * k + v) * k + w);
      }
  return Operation::from_codes(3, g.size(), std::move(codes));
}

Operation iterate_star(const Operation& f, int k) {
  if (k < 1) throw AlgebraError("iterate_star needs k >= 1");
  Operation out = f;
  for (int i = 1; i < k; ++i) out = star_compose(f, out);
  return out;
}

Term star_term(int k) {
  if (k < 1) throw AlgebraError("star_term needs k >= 1");
  // level[r] is the term of f^(j) with its variables rotated r times.
  const std::array<Term, 3> vars{Term::x(), Term::y(), Term::z()};
  std::array<Term, 3> level{Term::apply(vars[0], vars[1], vars[2]), Term::apply(vars[1], vars[2], vars[0]),
                            Term::apply(vars[2], vars[0], vars[1])};
  for (int j = 1; j < k; ++j) {
    std::array<Term, 3> next{Term::apply(level[0], level[1], level[2]), Term::apply(level[1], level[2], level[0]),
                             Term::apply(level[2], level[0], level[1])};
    level = std::move(next);
  }
  return level[0];
}

StarCycle star_cycle(const Operation& f) {
  require_ternary(f, "star_cycle");
  std::map<std::vector<Code>, int> first_seen;
  Operation current = f;
  for (int k = 1;; ++k) {
    std::vector<Code> key(current.codes().begin(), current.codes().end());
    auto [it, inserted] = first_seen.emplace(std::move(key), k);
    if (!inserted) {
      StarCycle c;
      c.tail = it->second;
      c.period = k - it->second;
      c.exponent = ((c.tail + c.period - 1) / c.period) * c.period;
      return c;
    }
    current = star_compose(f, current);
  }
}

Operation hat(const Operation& f) {
  if (f.arity() != 3 || !is_majority(f)) throw PreconditionError("hat requires a ternary majority operation");
  return iterate_star(f, star_cycle(f).exponent);
}

bool satisfies_star(const Operation& f) {
  require_ternary(f, "satisfies_star");
  return star_compose(f, f) == f;
}

bool check_lemma_2_3(const Operation& f) {
  require_ternary(f, "check_lemma_2_3");
  if (!is_majority(f) || !satisfies_star(f))
    throw PreconditionError("check_lemma_2_3 requires a majority operation satisfying the star identity");
  const int k = f.size();
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b)
      for (int c = 1; c <= k; ++c) {
        if (a == b || b == c || a == c) continue;
        const int u = f({a, b, c}), v = f({b, c, a}), w = f({c, a, b});
        const bool all_equal = u == v && v == w;
        const bool all_distinct = u != v && v != w && u != w;
        if (!all_equal && !all_distinct) return false;
        if (all_distinct && (f({u, v, w}) != u || f({v, w, u}) != v || f({w, u, v}) != w)) return false;
      }
  return true;
}

int predicted_fzy(const Operation& f, int a, int b, int c, int d) {
  if (const int v = f({a, b, c}); v != d) return v;
  if (const int v = f({a, b, d}); v != d) return v;
  if (const int v = f({a, d, c}); v != b) return v;
  return f({a, d, b});
}

Operation lemma_3_1_operation(int a, int b, int c, const std::array<int, 4>& values) {
  const int d = 10 - a - b - c;
  return majority_from(4, [&](int p, int q, int r) {
    if (p == a && q == b && r == c) return values[0];
    if (p == a && q == b && r == d) return values[1];
    if (p == a && q == d && r == c) return values[2];
    if (p == a && q == d && r == b) return values[3];
    return p;
  });
}

Lemma31Case lemma_3_1_case(int a, int b, int c, const std::array<int, 4>& values) {
  const int d = 10 - a - b - c;
  const Operation f = lemma_3_1_operation(a, b, c, values);
  const Operation fzy = named_superposition("zy", f);
  return Lemma31Case{{a, b, c}, values, predicted_fzy(f, a, b, c, d), fzy({a, b, c})};
}

Report verify_lemma_3_1() {
  Report report;
  report.check = "lemma31";
  std::int64_t cases = 0, mismatches = 0;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      for (int c = 1; c <= 4; ++c) {
        if (a == b || b == c || a == c) continue;
        for (int code = 0; code < 256; ++code) {
          const std::array<int, 4> values{(code >> 6) % 4 + 1, (code >> 4) % 4 + 1, (code >> 2) % 4 + 1, code % 4 + 1};
          const auto r = lemma_3_1_case(a, b, c, values);
          ++cases;
          if (r.predicted != r.actual) {
            ++mismatches;
            report.fail({{"triple", r.triple}, {"values", r.values}, {"predicted", r.predicted}, {"actual", r.actual}});
          }
        }
      }
  report.counters["cases"] = cases;
  report.counters["mismatches"] = mismatches;
  report.expected = {{"cases", 6144}, {"mismatches", 0}};
  if (cases != 6144) report.fail({{"reason", "case count"}, {"cases", cases}});
  return report;
}

}  // namespace cloneforge
