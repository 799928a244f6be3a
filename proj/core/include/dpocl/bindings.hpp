#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpocl/logic.hpp"

namespace dpocl {

/// Codesignation / non-codesignation constraint store.
///
/// Codesignation classes are kept as a triangular substitution: every bound
/// variable points either at another variable of its class or at the class's
/// single non-variable representative. Variable-to-variable bindings always
/// point from the larger key to the smaller, so the root of an unground class
/// is its lexicographically smallest member.
///
/// The store is a value: every operation returns a new store (or nullopt when
/// the extension would be inconsistent) and leaves `*this` untouched.
class BindingSet {
 public:
  BindingSet() = default;

  /// Adds the constraints making `a` and `b` codesignate. Occurs-checked.
  std::optional<BindingSet> unify(const Term& a, const Term& b) const;

  /// Pairwise unify() of two equal-length argument lists.
  std::optional<BindingSet> unify(std::span<const Term> a, std::span<const Term> b) const;

  /// Forbids `a` and `b` from codesignating. Fails iff they already do.
  std::optional<BindingSet> separate(const Term& a, const Term& b) const;

  /// Replaces every variable by its class representative (recursively).
  Term apply(const Term& t) const;
  Literal apply(const Literal& l) const;

  bool codesignate(const Term& a, const Term& b) const { return apply(a) == apply(b); }

  /// True if some extension of the store makes `a` and `b` equal.
  bool unifiable(const Term& a, const Term& b) const { return unify(a, b).has_value(); }

  bool empty() const { return bound_.empty() && distinct_.empty(); }

  /// Each bound variable with its fully applied value, ordered by variable.
  std::vector<std::pair<Term, Term>> codesignations() const;

  /// Non-codesignation pairs as recorded (not applied).
  const std::vector<std::pair<Term, Term>>& noncodesignations() const { return distinct_; }

 private:
  const Term& walk(const Term& t) const;
  bool occurs(const VarKey& v, const Term& t) const;
  bool unify_in_place(const Term& a, const Term& b);
  bool consistent() const;

  std::map<VarKey, Term> bound_;
  std::vector<std::pair<Term, Term>> distinct_;
};

/// Extends `bindings` so that `a` and `b` codesignate: same polarity, same
/// predicate, pairwise-unifiable arguments. nullopt signals a search dead end.
/// Throws Fault on an arity mismatch for the same predicate.
std::optional<BindingSet> unify(const Literal& a, const Literal& b, const BindingSet& bindings);

/// Like unify() but matches `a` against the negation of `b`.
std::optional<BindingSet> unify_negation(const Literal& a, const Literal& b,
                                         const BindingSet& bindings);

std::optional<BindingSet> add_noncodesignation(const BindingSet& bindings, const Term& x,
                                               const Term& y);

Literal apply(const BindingSet& bindings, const Literal& l);

}  // namespace dpocl
