#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "cloneforge/operation.hpp"
#include "cloneforge/report.hpp"

namespace cloneforge {

/// A term over the variables x, y, z and one ternary symbol f. Terms are
/// immutable and share subterms, so a term may be a DAG.
class Term {
 public:
  static Term variable(int index);  // 1 = x, 2 = y, 3 = z
  static Term apply(Term first, Term second, Term third);
  static Term x() { return variable(1); }
  static Term y() { return variable(2); }
  static Term z() { return variable(3); }

  bool is_variable() const noexcept;
  int variable_index() const noexcept;  // 0 for applications
  const Term& child(int i) const;       // 0-based

  /// Replaces x, y, z by the given terms (grafting).
  Term substitute(const std::array<Term, 3>& replacement) const;

  /// `f(z,y,f(x,y,z))` style. Exponential for DAGs with deep sharing.
  std::string to_string() const;

  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Term parse_term(std::string_view text);

/// The term function of t in the algebra (A; f). Shared subterms are
/// evaluated once.
Operation eval_term(const Term& t, const Operation& f);

/// f_x, f_y, f_z substitute f into one argument of itself; f_zy = (f_z)_y.
Term superposition_term(std::string_view name);
Operation named_superposition(std::string_view name, const Operation& f);

/// (g * h)(x,y,z) = g(h(x,y,z), h(y,z,x), h(z,x,y)).
Operation star_compose(const Operation& g, const Operation& h);

/// f^(1) = f, f^(k+1) = f * f^(k).
Operation iterate_star(const Operation& f, int k);

/// Term for f^(k) with 3k shared nodes.
Term star_term(int k);

/// Shape of the eventually periodic sequence f^(1), f^(2), ...: f^(i) = f^(j)
/// for i, j >= tail with i = j mod period. `exponent` is the least k >= tail
/// divisible by period; f^(exponent) is the idempotent of the sequence.
struct StarCycle {
  int tail = 1;
  int period = 1;
  int exponent = 1;
};

StarCycle star_cycle(const Operation& f);

/// The idempotent f^(k) of the star sequence of a majority operation.
Operation hat(const Operation& f);

/// g(g(x,y,z), g(y,z,x), g(z,x,y)) = g(x,y,z) on every triple.
bool satisfies_star(const Operation& f);

/// For a majority f satisfying the star identity: on every pairwise-distinct
/// (a,b,c) with u = f(a,b,c), v = f(b,c,a), w = f(c,a,b), the set {u,v,w}
/// does not have exactly two elements, and when it has three, f returns its
/// first argument on <uvw>. Throws PreconditionError if f is not a majority
/// operation satisfying the identity.
bool check_lemma_2_3(const Operation& f);

/// Case chain for f_zy(a,b,c), where d is the fourth element: f(a,b,c) unless
/// that is d; then f(a,b,d) unless that is d; then f(a,d,c) unless that is b;
/// otherwise f(a,d,b).
int predicted_fzy(const Operation& f, int a, int b, int c, int d);

struct Lemma31Case {
  std::array<int, 3> triple;
  std::array<int, 4> values;  // f(a,b,c), f(a,b,d), f(a,d,c), f(a,d,b)
  int predicted;
  int actual;
};

/// The majority operation on {1..4} taking the four given values on
/// (a,b,c), (a,b,d), (a,d,c), (a,d,b) and its first argument on every other
/// pairwise-distinct triple.
Operation lemma_3_1_operation(int a, int b, int c, const std::array<int, 4>& values);
Lemma31Case lemma_3_1_case(int a, int b, int c, const std::array<int, 4>& values);

/// Exhaustive check of the f_zy case chain: 24 triples x 256 value choices.
Report verify_lemma_3_1();

}  // namespace cloneforge
