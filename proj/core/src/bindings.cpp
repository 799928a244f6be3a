#include "dpocl/bindings.hpp"

namespace dpocl {

const Term& BindingSet::walk(const Term& t) const {
  const Term* cur = &t;
  while (cur->is_variable()) {
    auto it = bound_.find(key_of(*cur));
    if (it == bound_.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool BindingSet::occurs(const VarKey& v, const Term& t) const {
  const Term& w = walk(t);
  if (w.is_variable()) return key_of(w) == v;
  for (const auto& a : w.args)
    if (occurs(v, a)) return true;
  return false;
}

bool BindingSet::unify_in_place(const Term& a, const Term& b) {
  // Copies: walk() returns references into bound_, which we mutate below.
  Term x = walk(a);
  Term y = walk(b);
  if (x.is_variable() && y.is_variable()) {
    auto kx = key_of(x);
    auto ky = key_of(y);
    if (kx == ky) return true;
    if (kx < ky)
      bound_.emplace(std::move(ky), std::move(x));
    else
      bound_.emplace(std::move(kx), std::move(y));
    return true;
  }
  if (x.is_variable() || y.is_variable()) {
    Term& var = x.is_variable() ? x : y;
    Term& val = x.is_variable() ? y : x;
    auto k = key_of(var);
    if (occurs(k, val)) return false;
    bound_.emplace(std::move(k), std::move(val));
    return true;
  }
  if (x.kind != y.kind || x.name != y.name || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!unify_in_place(x.args[i], y.args[i])) return false;
  return true;
}

bool BindingSet::consistent() const {
  for (const auto& [a, b] : distinct_)
    if (apply(a) == apply(b)) return false;
  return true;
}

std::optional<BindingSet> BindingSet::unify(const Term& a, const Term& b) const {
  BindingSet next = *this;
  if (!next.unify_in_place(a, b) || !next.consistent()) return std::nullopt;
  return next;
}

std::optional<BindingSet> BindingSet::unify(std::span<const Term> a,
                                            std::span<const Term> b) const {
  if (a.size() != b.size()) return std::nullopt;
  BindingSet next = *this;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!next.unify_in_place(a[i], b[i])) return std::nullopt;
  if (!next.consistent()) return std::nullopt;
  return next;
}

std::optional<BindingSet> BindingSet::separate(const Term& a, const Term& b) const {
  if (codesignate(a, b)) return std::nullopt;
  BindingSet next = *this;
  next.distinct_.emplace_back(a, b);
  return next;
}

Term BindingSet::apply(const Term& t) const {
  const Term& w = walk(t);
  if (w.kind != Term::Kind::Compound) return w;
  std::vector<Term> args;
  args.reserve(w.args.size());
  for (const auto& a : w.args) args.push_back(apply(a));
  return Term::compound(w.name, std::move(args));
}

Literal BindingSet::apply(const Literal& l) const {
  Literal out;
  out.positive = l.positive;
  out.predicate = l.predicate;
  out.args.reserve(l.args.size());
  for (const auto& a : l.args) out.args.push_back(apply(a));
  return out;
}

std::vector<std::pair<Term, Term>> BindingSet::codesignations() const {
  std::vector<std::pair<Term, Term>> out;
  out.reserve(bound_.size());
  for (const auto& [k, v] : bound_) {
    Term var = Term::variable(k.name, k.instance);
    out.emplace_back(var, apply(var));
  }
  return out;
}

namespace {

std::optional<BindingSet> unify_args(const Literal& a, const Literal& b,
                                     const BindingSet& bindings) {
  if (a.predicate != b.predicate) return std::nullopt;
  if (a.args.size() != b.args.size())
    throw Fault("arity mismatch for predicate '" + a.predicate + "': " + a.str() + " vs " +
                b.str());
  return bindings.unify(a.args, b.args);
}

}  // namespace

std::optional<BindingSet> unify(const Literal& a, const Literal& b, const BindingSet& bindings) {
  if (a.positive != b.positive) return std::nullopt;
  return unify_args(a, b, bindings);
}

std::optional<BindingSet> unify_negation(const Literal& a, const Literal& b,
                                         const BindingSet& bindings) {
  if (a.positive == b.positive) return std::nullopt;
  return unify_args(a, b, bindings);
}

std::optional<BindingSet> add_noncodesignation(const BindingSet& bindings, const Term& x,
                                               const Term& y) {
  return bindings.separate(x, y);
}

Literal apply(const BindingSet& bindings, const Literal& l) { return bindings.apply(l); }

}  // namespace dpocl
